"""Exception types shared across the package."""


class DSMError(Exception):
    """Base class for all errors raised by dsmap."""


class InvalidArgument(DSMError, ValueError):
    pass


class ResourceError(DSMError, RuntimeError):
    """A computation would exceed a configured budget (memory, digits, steps)."""


class InvariantViolation(DSMError, AssertionError):
    """A structural property that must hold was observed to fail."""


class HypothesisViolation(DSMError, ValueError):
    """A verifier was called on parameters outside its theorem's hypotheses."""
