"""Exact simulation and verification of the discontinuous standard map."""
from .errors import DSMError, HypothesisViolation, InvalidArgument, InvariantViolation, ResourceError
from .exact import CylinderPoint, iterate_exact, sign_against_half, step_exact
from .lattice import LatticeState, LiftedState, ReducedParams, embed, make_params, project, step_lattice, step_lifted
from .orbits import (
    Decomposition,
    EscapeRecord,
    Orbit,
    OrbitClass,
    decompose,
    escape_length,
    period_partition,
    trace_orbit,
    trace_orbit_exact,
)

__version__ = "0.1.0"
