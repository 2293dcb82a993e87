"""Reduction of the cylinder map to a finite lattice on Z_bq x Z_q.

With ``alpha = p/q`` and ``y0 = a/b`` the band index ``r = floor(bq x)`` and
the level ``j = y - y0 (mod q)`` evolve as

    r' = r + p (a + b j)            (mod bq)
    j' = j + sgn(2 r' - bq + 1 + delta)  (mod q)

where ``delta = bq mod 2``. Lattice points sit at band midpoints
``x = (2 + delta + 4 r) / (4 bq)`` so the sign argument is always odd.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Tuple

from .errors import InvalidArgument
from .exact import CylinderPoint

# Largest magnitude the compiled kernels handle without overflow.
WORD_LIMIT = 2**62


@dataclass(frozen=True)
class ReducedParams:
    p: int
    q: int
    a: int
    b: int

    @property
    def bq(self) -> int:
        return self.b * self.q

    @property
    def delta(self) -> int:
        return self.bq % 2

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def y0(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def n_states(self) -> int:
        return self.bq * self.q

    def fits_word(self) -> bool:
        """True when the compiled kernels can run without overflow.

        The per-level shift ``p (a + b j)`` is reduced modulo ``bq`` with Python
        integers before it reaches a kernel, so only ``bq`` itself is bounded.
        """
        return 2 * self.bq < WORD_LIMIT and self.n_states < WORD_LIMIT

    def as_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "a": self.a, "b": self.b, "bq": self.bq, "delta": self.delta}


class LatticeState(NamedTuple):
    r: int
    j: int


class LiftedState(NamedTuple):
    state: LatticeState
    lift: int


def make_params(p: int, q: int, a: int = 0, b: int = 1) -> ReducedParams:
    """Validate ``alpha = p/q`` (lowest terms) and ``y0 = a/b``.

    ``a`` is folded into ``[0, b)``; the integer part of ``y0`` only relabels
    levels. ``a/b`` must be in lowest terms after folding.
    """
    for name, v in (("p", p), ("q", q), ("a", a), ("b", b)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise InvalidArgument(f"{name} must be an integer, got {v!r}")
    if q < 1:
        raise InvalidArgument("q must be >= 1")
    if b < 1:
        raise InvalidArgument("b must be >= 1")
    if p < 1:
        raise InvalidArgument("p must be >= 1")
    if math.gcd(p, q) != 1:
        raise InvalidArgument(f"p/q = {p}/{q} is not in lowest terms")
    a %= b
    if math.gcd(a, b) != 1:
        raise InvalidArgument(f"a/b = {a}/{b} is not in lowest terms")
    return ReducedParams(p, q, a, b)


def check_state(s: LatticeState, params: ReducedParams) -> LatticeState:
    r, j = s
    if not (0 <= r < params.bq and 0 <= j < params.q):
        raise InvalidArgument(f"state {tuple(s)} outside Z_{params.bq} x Z_{params.q}")
    return LatticeState(r, j)


def embed(s: LatticeState, params: ReducedParams) -> CylinderPoint:
    r, j = check_state(s, params)
    bq = params.bq
    return CylinderPoint(Fraction(2 + params.delta + 4 * r, 4 * bq), params.y0 + j)


def project(pt: CylinderPoint, params: ReducedParams) -> LatticeState:
    """Map a cylinder point to the lattice state of its band.

    Band boundaries ``x = k / bq`` are rejected rather than tie-broken. For odd
    ``bq`` the middle band straddles ``x = 1/2``; its representative is the
    lattice point right of the line, so only points on that side share its
    orbit.
    """
    shift = pt.y - params.y0
    if shift.denominator != 1:
        raise InvalidArgument(f"y = {pt.y} is not on the grid {params.y0} + Z")
    scaled = pt.x * params.bq
    if scaled.denominator == 1:
        raise InvalidArgument(f"x = {pt.x} lies on a band boundary")
    return LatticeState(math.floor(scaled), int(shift) % params.q)


def step_lattice(s: LatticeState, params: ReducedParams) -> Tuple[LatticeState, int]:
    r, j = s
    bq = params.bq
    r = (r + params.p * (params.a + params.b * j)) % bq
    dj = 1 if 2 * r - bq + 1 + params.delta > 0 else -1
    return LatticeState(r, (j + dj) % params.q), dj


def step_lifted(s: LiftedState, params: ReducedParams) -> LiftedState:
    state, dj = step_lattice(s.state, params)
    return LiftedState(state, s.lift + dj)
