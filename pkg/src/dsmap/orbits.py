"""Orbit tracing, phase-space decomposition and the escape length."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import _kernels
from .exact import step_exact
from .errors import InvalidArgument, InvariantViolation, ResourceError
from .lattice import (
    LatticeState,
    LiftedState,
    ReducedParams,
    check_state,
    embed,
    make_params,
    project,
    step_lifted,
)

DEFAULT_MEMORY_BUDGET = 200_000_000


class OrbitClass(str, enum.Enum):
    BOUNDED = "bounded"
    ESCAPING = "escaping"


@dataclass(frozen=True)
class Orbit:
    representative: LatticeState
    period: int
    winding: int

    @property
    def orbit_class(self) -> OrbitClass:
        return OrbitClass.ESCAPING if self.winding else OrbitClass.BOUNDED

    @property
    def escaping(self) -> bool:
        return self.winding != 0


@dataclass
class Decomposition:
    params: ReducedParams
    orbits: List[Orbit]
    total_points: int
    _arrays: Optional[tuple] = field(default=None, repr=False, compare=False)

    @property
    def escaping(self) -> List[Orbit]:
        return [o for o in self.orbits if o.escaping]

    def labels(self) -> np.ndarray:
        """Orbit index of every state, as a ``(q, bq)`` array indexed ``[j, r]``."""
        p = self.params
        if self._arrays is None:
            reps_r = np.array([o.representative.r for o in self.orbits], dtype=np.int64)
            reps_j = np.array([o.representative.j for o in self.orbits], dtype=np.int64)
            periods = np.array([o.period for o in self.orbits], dtype=np.int64)
            self._arrays = (reps_r, reps_j, periods)
        reps_r, reps_j, periods = self._arrays
        flat = _kernels.label(increments(p), p.bq, p.q, reps_r, reps_j, periods)
        return flat.reshape(p.q, p.bq)


@dataclass(frozen=True)
class EscapeRecord:
    q: int
    ell: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.ell, self.q * self.q)


def increments(params: ReducedParams) -> np.ndarray:
    """Per-level horizontal shift ``p (a + b j) mod bq`` for ``j`` in ``[0, q)``."""
    if not params.fits_word():
        raise ResourceError(f"bq = {params.bq} does not fit the compiled kernels")
    p, a, b, bq = params.p, params.a, params.b, params.bq
    return np.array([(p * (a + b * j)) % bq for j in range(params.q)], dtype=np.int64)


def _winding(lift: int, params: ReducedParams) -> int:
    if lift % params.q:
        raise InvariantViolation(f"orbit lift {lift} is not a multiple of q = {params.q}")
    return lift // params.q


def _trace_python(start: LatticeState, params: ReducedParams, max_steps: int):
    s = LiftedState(start, 0)
    rep = (start.j, start.r)
    n = 0
    while True:
        s = step_lifted(s, params)
        n += 1
        if s.state == start:
            return n, s.lift, LatticeState(rep[1], rep[0])
        rep = min(rep, (s.state.j, s.state.r))
        if n >= max_steps:
            raise ResourceError(f"orbit from {tuple(start)} did not close within {max_steps} steps")


def trace_orbit(start: LatticeState, params: ReducedParams) -> Orbit:
    start = check_state(start, params)
    max_steps = params.n_states
    if params.fits_word():
        period, lift, rr, rj = _kernels.trace(start.r, start.j, increments(params), params.bq, params.q, max_steps)
        if period < 0:
            raise ResourceError(f"orbit from {tuple(start)} did not close within {max_steps} steps")
        rep = LatticeState(int(rr), int(rj))
        period, lift = int(period), int(lift)
    else:
        period, lift, rep = _trace_python(start, params, max_steps)
    return Orbit(rep, period, _winding(lift, params))


def trace_orbit_exact(start: LatticeState, params: ReducedParams) -> Orbit:
    """Same as :func:`trace_orbit` but iterating the rational cylinder map on the embedded point."""
    start = check_state(start, params)
    pt = embed(start, params)
    y0 = pt.y
    rep = (start.j, start.r)
    for n in range(1, params.n_states + 1):
        pt = step_exact(pt, params.alpha)
        s = project(pt, params)
        if s == start:
            return Orbit(LatticeState(rep[1], rep[0]), n, _winding(int(pt.y - y0), params))
        rep = min(rep, (s.j, s.r))
    raise ResourceError(f"orbit from {tuple(start)} did not close within {params.n_states} steps")


def decompose(
    params: ReducedParams,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    stop_at_escape: bool = False,
) -> Decomposition:
    """Split the whole lattice into periodic orbits.

    With ``stop_at_escape`` the scan ends at the first escaping orbit, so the
    result is a partial decomposition (used by searches that only need a
    yes/no answer).
    """
    n = params.n_states
    if n > memory_budget:
        raise ResourceError(f"{n} lattice states exceed the budget of {memory_budget}")
    count, rr, rj, per, lifts = _kernels.decompose(increments(params), params.bq, params.q, stop_at_escape)
    if count < 0:
        raise InvariantViolation("a cycle failed to close; the lattice map is not a bijection")
    orbits = [
        Orbit(LatticeState(int(r), int(j)), int(t), _winding(int(lift), params))
        for r, j, t, lift in zip(rr[:count], rj[:count], per[:count], lifts[:count])
    ]
    d = Decomposition(params, orbits, n, (rr[:count].copy(), rj[:count].copy(), per[:count].copy()))
    if not stop_at_escape:
        covered = int(per[:count].sum())
        if covered != n:
            raise InvariantViolation(f"orbit periods sum to {covered}, expected {n}")
    return d


def bottleneck_start(q: int) -> LatticeState:
    """The one state at the critical level ``(q-1)/2`` from which orbits climb through it."""
    return LatticeState((q - 1) // 2, (q - 1) // 2)


def escape_length(q: int) -> EscapeRecord:
    """Period of the escaping orbit for ``alpha = 1/q`` and ``y0 = 0``, q odd.

    Traces only the orbit through the bottleneck crossing point instead of
    decomposing the whole lattice.
    """
    if q < 3 or q % 2 == 0:
        raise InvalidArgument(f"escape length needs odd q >= 3, got {q}")
    params = make_params(1, q, 0, 1)
    orbit = trace_orbit(bottleneck_start(q), params)
    if orbit.winding == 0 or orbit.period % 2 == 0:
        raise InvariantViolation(
            f"orbit through the bottleneck at q={q} has period {orbit.period} and winding {orbit.winding}"
        )
    return EscapeRecord(q, orbit.period)


def period_partition(d: Decomposition, bounded_only: bool = False) -> List[int]:
    return sorted((o.period for o in d.orbits if not (bounded_only and o.escaping)), reverse=True)
