"""Exact rational iteration of the discontinuous standard map on the cylinder.

The map acts on ``[0, 1) x R`` by

    x' = x + alpha * y  (mod 1)
    y' = y + sgn(x' - 1/2)

with ``sgn`` taken as 0 on both singular lines ``x' = 0`` and ``x' = 1/2``.
Everything here is exact: values are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

from .errors import InvalidArgument, ResourceError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

HALF = Fraction(1, 2)
DEFAULT_DIGIT_BOUND = 10**6


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise InvalidArgument("floats are not exact; pass a Fraction, int or 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True)
class CylinderPoint:
    """A phase point with ``0 <= x < 1``; ``x`` is reduced modulo 1 on construction."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        x = as_rational(self.x)
        y = as_rational(self.y)
        object.__setattr__(self, "x", x - math.floor(x))
        object.__setattr__(self, "y", y)

    def reflect(self) -> "CylinderPoint":
        """Return the image under the point reflection ``(x, y) -> (1, 0) - (x, y)``."""
        return CylinderPoint(1 - self.x, -self.y)


def sign_against_half(x: Fraction) -> int:
    if not 0 <= x < 1:
        raise InvalidArgument(f"x must lie in [0, 1), got {x}")
    if x == 0 or x == HALF:
        return 0
    return 1 if x > HALF else -1


def step_exact(pt: CylinderPoint, alpha: RationalLike) -> CylinderPoint:
    alpha = as_rational(alpha)
    x = pt.x + alpha * pt.y
    x -= math.floor(x)
    return CylinderPoint(x, pt.y + sign_against_half(x))


def _digits(q: Fraction) -> int:
    return max(len(str(abs(q.numerator))), len(str(q.denominator)))


def iterate_exact(
    pt: CylinderPoint,
    alpha: RationalLike,
    n: int,
    digit_bound: int = DEFAULT_DIGIT_BOUND,
) -> List[CylinderPoint]:
    """Return ``[pt, f(pt), ..., f^n(pt)]``.

    Raises :class:`ResourceError` if any coordinate needs more than
    ``digit_bound`` decimal digits. For rational input the denominators are
    invariant, so the guard only trips on pathological input.
    """
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    alpha = as_rational(alpha)
    out = [pt]
    for _ in range(n):
        pt = step_exact(pt, alpha)
        if _digits(pt.x) > digit_bound or _digits(pt.y) > digit_bound:
            raise ResourceError(f"rational size exceeded {digit_bound} digits")
        out.append(pt)
    return out
