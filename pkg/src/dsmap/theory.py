"""Constructive checks of the boundedness, escape and dwell-time results.

Each ``verify_*`` function returns a :class:`VerdictReport` listing one case
per checked statement, with the expected and observed values side by side.
"""
from __future__ import annotations

import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from . import _kernels
from .errors import HypothesisViolation, InvalidArgument
from .exact import CylinderPoint, step_exact
from .lattice import LatticeState, ReducedParams, make_params, step_lattice
from .orbits import (
    DEFAULT_MEMORY_BUDGET,
    bottleneck_start,
    decompose,
    escape_length,
    increments,
    trace_orbit,
)


# -- reports ----------------------------------------------------------------


@dataclass
class Case:
    id: str
    expected: Any
    observed: Any
    passed: bool

    def as_dict(self) -> dict:
        return {"id": self.id, "expected": self.expected, "observed": self.observed, "pass": self.passed}


@dataclass
class VerdictReport:
    suite: str
    params: Any
    cases: List[Case] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def check(self, id: str, expected, observed, passed: Optional[bool] = None) -> bool:
        ok = expected == observed if passed is None else bool(passed)
        self.cases.append(Case(id, expected, observed, ok))
        return ok

    def extend(self, other: "VerdictReport", prefix: str = "") -> None:
        for c in other.cases:
            self.cases.append(Case(prefix + c.id, c.expected, c.observed, c.passed))

    def as_dict(self) -> dict:
        cases = sorted(self.cases, key=lambda c: c.id)
        return {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "cases": [c.as_dict() for c in cases],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, default=str) + "\n"

    def failures(self) -> List[Case]:
        return [c for c in self.cases if not c.passed]


# -- bottleneck level -------------------------------------------------------


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a x + b y = g = gcd(a, b)``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def solve_linear_congruence(coef: int, rhs: int, mod: int) -> Optional[Tuple[int, int]]:
    """Solve ``coef * x = rhs (mod mod)``.

    Returns ``(x0, step)`` so that the solutions are ``x0 + t * step``, or
    ``None`` when ``gcd(coef, mod)`` does not divide ``rhs``.
    """
    g, x, _ = ext_gcd(coef % mod, mod)
    if rhs % g:
        return None
    step = mod // g
    return (x * (rhs // g)) % step, step


@dataclass(frozen=True)
class BottleneckSolution:
    exists: bool
    j_star: Optional[int]
    solutions_mod_bq: Tuple[int, ...]


def solve_bottleneck(params: ReducedParams) -> BottleneckSolution:
    """Find levels j with ``p (a + b j) = floor(bq / 2) (mod bq)``."""
    p, q, a, b, bq = params.p, params.q, params.a, params.b, params.bq
    sol = solve_linear_congruence(p * b, bq // 2 - p * a, bq)
    if sol is None:
        return BottleneckSolution(False, None, ())
    j0, step = sol
    # gcd(pb, bq) = b, so step = q and there are exactly b solutions below bq
    return BottleneckSolution(True, j0, tuple(j0 + k * step for k in range(bq // step)))


def level_crossings(params: ReducedParams, level: int) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    """Two-step passages through ``level``.

    Returns ``(up, down)``: lists of ``(r, r_next)`` where ``r`` is the state
    on ``level`` entered from the level below (above) and left towards the
    level above (below), and ``r_next`` is its image.
    """
    q = params.q
    up, down = [], []
    for r in range(params.bq):
        for src, sign, out in (((level - 1) % q, 1, up), ((level + 1) % q, -1, down)):
            s1, d1 = step_lattice(LatticeState(r, src), params)
            if d1 != sign:
                continue
            s2, d2 = step_lattice(s1, params)
            if d2 == sign:
                out.append((s1.r, s2.r))
    return sorted(up), sorted(down)


def verify_boundedness_theorem(params: ReducedParams, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> VerdictReport:
    """Full-decomposition check of bounded (even bq) versus single-escape (odd bq) behaviour."""
    sol = solve_bottleneck(params)
    if not sol.exists:
        raise HypothesisViolation(f"no critical level exists for {params.as_dict()}")
    rep = VerdictReport("bottleneck", params.as_dict())
    d = decompose(params, memory_budget)
    esc = d.escaping
    up, down = level_crossings(params, sol.j_star)
    rep.check("partition", params.n_states, sum(o.period for o in d.orbits))
    rep.check("parity", True, all((o.period - o.winding * params.q) % 2 == 0 for o in d.orbits))
    if params.bq % 2 == 0:
        rep.check("escaping_count", 0, len(esc))
        rep.check("crossings_up", [], up)
        rep.check("crossings_down", [], down)
    else:
        rep.check("escaping_count", 1, len(esc))
        rep.check("crossings_up", [((params.bq - 1) // 2, params.bq - 1)], up)
        rep.check("crossings_down", [], down)
        if esc:
            o = esc[0]
            rep.check("escaping_winding_nonzero", True, o.winding != 0)
            rep.check("escaping_period_odd", True, o.period % 2 == 1)
            through = trace_orbit(LatticeState((params.bq - 1) // 2, sol.j_star), params)
            rep.check("escaping_through_crossing", o.representative, through.representative)
    return rep


# -- alpha = 1/(4k+2), y0 = 1/2 ---------------------------------------------


def verify_q4k2(k: int, max_check: int = 10**5) -> VerdictReport:
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    q = 4 * k + 2
    params = make_params(1, q, 1, 2)
    start = LatticeState(4 * k - 1, 2 * k + 1)
    rep = VerdictReport("q4k2", {"k": k, **params.as_dict()})
    orbit = trace_orbit(start, params)
    rep.check("winding_nonzero", True, orbit.winding != 0)
    n = min(orbit.period, max_check)
    rs, _, lifts = _kernels.lifted_path(start.r, start.j, increments(params), params.bq, q, max(n, 2))
    rep.check("two_rises", [1, 2], [int(lifts[1]), int(lifts[2])])
    m = np.arange(n)
    bad = np.nonzero((rs[:n] + (m % 2)) % 4 != 3)[0]
    rep.check("mod4_invariant", -1, int(bad[0]) if bad.size else -1)
    return rep


# -- escape-seed search -----------------------------------------------------


def search_escape_seed(
    k: int,
    b_max: int,
    p: int = 1,
    a_values: Optional[Iterable[int]] = None,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> Optional[Tuple[int, int]]:
    """Smallest ``(b, a)`` giving ``alpha = p/4k`` an escaping orbit on level ``a/b``.

    Candidates run through ``b`` ascending, then ``a`` ascending over
    ``0 <= a < b`` with ``gcd(a, b) = 1``; ``a_values`` restricts ``a``.
    """
    if k < 1 or b_max < 1:
        raise InvalidArgument("k and b_max must be >= 1")
    q = 4 * k
    allowed = None if a_values is None else set(a_values)
    for b in range(1, b_max + 1):
        for a in range(b):
            if math.gcd(a, b) != 1 or (allowed is not None and a not in allowed):
                continue
            d = decompose(make_params(p, q, a, b), memory_budget, stop_at_escape=True)
            if d.orbits and d.orbits[-1].escaping:
                return b, a
    return None


# -- escape length lower bound and dwell lemmas ------------------------------


def lower_bound_sum(q: int) -> int:
    if q < 3 or q % 2 == 0:
        raise InvalidArgument(f"q must be odd and >= 3, got {q}")
    return sum((q - 1) // (2 * k) - 1 for k in range(1, q // 9 + 1))


@dataclass(frozen=True)
class DwellReport:
    """Dwell of one orbit on a pair of adjacent levels.

    ``N_m`` counts the consecutive points ``n = 0, 1, ...`` spent on the two
    levels; ``last_index`` is the index of the last of them (``N_m - 1``).
    """

    m: int
    start_r: int
    N_m: int
    bound: int
    last_index: int

    @property
    def holds(self) -> bool:
        return self.N_m >= self.bound


def measure_dwell(q: int, m: int, s: int) -> DwellReport:
    """Follow the orbit from level ``(q+1)/2 + m`` while it bounces between that level and the one below."""
    if q < 9 or q % 2 == 0:
        raise InvalidArgument(f"q must be odd and >= 9, got {q}")
    if not 1 <= m <= q // 9:
        raise InvalidArgument(f"m must lie in [1, {q // 9}], got {m}")
    if not 0 <= s < m:
        raise InvalidArgument(f"s must lie in [0, {m - 1}], got {s}")
    params = make_params(1, q)
    top = (q + 1) // 2 + m
    start = LatticeState((q + 1) // 2 + s, top)
    levels = {top, top - 1}
    state, last = start, 0
    # an orbit that never leaves the two levels dwells forever; stop after one lap
    while last < params.n_states:
        state, _ = step_lattice(state, params)
        if state.j not in levels or state == start:
            break
        last += 1
    return DwellReport(m, start.r, last + 1, (q - 1) // (2 * m) - 1, last)


def verify_dwell(q_max: int = 99) -> VerdictReport:
    rep = VerdictReport("dwell", {"q_from": 9, "q_to": q_max})
    for q in range(9, q_max + 1, 2):
        for m in range(1, q // 9 + 1):
            for s in range(m):
                d = measure_dwell(q, m, s)
                rep.check(f"q={q:05d},m={m:04d},s={s:04d}", f">={d.bound}", d.N_m, d.holds)
    return rep


def verify_two_rise_confinement(q: int, m: int) -> VerdictReport:
    if q < 3 or q % 2 == 0:
        raise InvalidArgument(f"q must be odd and >= 3, got {q}")
    if not 1 <= m <= (q - 1) // 2:
        raise InvalidArgument(f"m must lie in [1, {(q - 1) // 2}], got {m}")
    params = make_params(1, q)
    lo, hi = (q - 1) // 2, (q - 1) // 2 + m - 1
    rep = VerdictReport("two-rise", {"q": q, "m": m})
    j0 = (q + 1) // 2 + m - 2
    for r0 in range(q):
        s1, d1 = step_lattice(LatticeState(r0, j0), params)
        if d1 != 1:
            continue
        s2, d2 = step_lattice(s1, params)
        if d2 == 1:
            rep.check(f"r0={r0:06d}", [lo, hi], s2.r, lo <= s2.r <= hi)
    return rep


@njit(cache=True)
def _max_window_oscillation(values, width):
    """Largest ``max - min`` over all runs of ``width`` consecutive values (monotone deques)."""
    n = values.shape[0]
    qmax = np.empty(n, dtype=np.int64)
    qmin = np.empty(n, dtype=np.int64)
    hmax = tmax = hmin = tmin = 0
    best = 0
    for i in range(n):
        v = values[i]
        while tmax > hmax and values[qmax[tmax - 1]] <= v:
            tmax -= 1
        qmax[tmax] = i
        tmax += 1
        while tmin > hmin and values[qmin[tmin - 1]] >= v:
            tmin -= 1
        qmin[tmin] = i
        tmin += 1
        if qmax[hmax] <= i - width:
            hmax += 1
        if qmin[hmin] <= i - width:
            hmin += 1
        if i >= width - 1:
            osc = values[qmax[hmax]] - values[qmin[hmin]]
            if osc > best:
                best = osc
    return best


def window_width(q: int) -> int:
    return int(math.floor(q * math.log(q)))


def verify_window_bound(q: int) -> VerdictReport:
    """Lift oscillation of the escaping orbit over every window of ``floor(q ln q)`` consecutive points.

    Windows wrap around the period, so the lifted path is followed for
    ``ell + W - 1`` points.
    """
    if q < 3 or q % 2 == 0:
        raise InvalidArgument(f"q must be odd and >= 3, got {q}")
    params = make_params(1, q)
    ell = escape_length(q).ell
    width = window_width(q)
    start = bottleneck_start(q)
    _, _, lifts = _kernels.lifted_path(start.r, start.j, increments(params), q, q, ell + width - 1)
    osc = int(_max_window_oscillation(lifts, width))
    rep = VerdictReport("window", {"q": q, "W": width, "ell": ell})
    rep.check("oscillation_below_q", f"<{q}", osc, osc < q)
    return rep


# -- period-4 census --------------------------------------------------------


def count_period4(k: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    d = decompose(make_params(1, 4 * k), memory_budget)
    return sum(1 for o in d.orbits if o.period == 4)


def period4_family(k: int) -> List[int]:
    """Periods of the points ``(r, k)`` with ``2k <= r < 3k - 1`` at ``q = 4k``."""
    params = make_params(1, 4 * k)
    return [trace_orbit(LatticeState(r, k), params).period for r in range(2 * k, 3 * k - 1)]


def verify_period4(k_max: int = 25) -> VerdictReport:
    rep = VerdictReport("period4", {"k_from": 1, "k_to": k_max})
    for k in range(1, k_max + 1):
        rep.check(f"k={k:04d}:count", 2 * k - 1, count_period4(k))
        rep.check(f"k={k:04d}:family", [4] * (k - 1), period4_family(k))
        rep.check(f"k={k:04d}:origin", 4, trace_orbit(LatticeState(0, 0), make_params(1, 4 * k)).period)
    return rep


# -- campaign wrappers ------------------------------------------------------


def _pmap(fn, items, threads: int) -> list:
    """Order-preserving map; the kernels release the GIL, so threads overlap."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


def verify_boundedness_sweep(
    q_max: int = 200, memory_budget: int = DEFAULT_MEMORY_BUDGET, threads: int = 1
) -> VerdictReport:
    rep = VerdictReport("bottleneck", {"p": 1, "a": 0, "b": 1, "q_from": 1, "q_to": q_max})
    qs = range(1, q_max + 1)
    reports = _pmap(lambda q: verify_boundedness_theorem(make_params(1, q), memory_budget), qs, threads)
    for q, sub in zip(qs, reports):
        rep.extend(sub, f"q={q:05d}:")
    return rep


def verify_q4k2_sweep(k_max: int = 50, max_check: int = 10**5, threads: int = 1) -> VerdictReport:
    rep = VerdictReport("q4k2", {"k_from": 1, "k_to": k_max, "max_check": max_check})
    ks = range(1, k_max + 1)
    for k, sub in zip(ks, _pmap(lambda k: verify_q4k2(k, max_check), ks, threads)):
        rep.extend(sub, f"k={k:04d}:")
    return rep


def verify_two_rise_sweep(q_max: int = 99) -> VerdictReport:
    rep = VerdictReport("two-rise", {"q_from": 3, "q_to": q_max})
    for q in range(3, q_max + 1, 2):
        for m in range(1, (q - 1) // 2 + 1):
            rep.extend(verify_two_rise_confinement(q, m), f"q={q:05d},m={m:04d}:")
    return rep


def verify_window_sweep(qs: Sequence[int] = (101, 331, 991)) -> VerdictReport:
    rep = VerdictReport("window", {"q": list(qs)})
    for q in qs:
        rep.extend(verify_window_bound(q), f"q={q:05d}:")
    return rep


def verify_lower_bound(q_max: int = 2001, threads: int = 1) -> VerdictReport:
    rep = VerdictReport("lower-bound", {"q_from": 3, "q_to": q_max})
    qs = range(3, q_max + 1, 2)
    for q, rec in zip(qs, _pmap(escape_length, qs, threads)):
        lb = lower_bound_sum(q)
        rep.check(f"q={q:05d}", f">={lb}", rec.ell, lb <= rec.ell)
    return rep


def _random_rational(rng: random.Random, max_den: int, lo: int, hi: int) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den - 1), den)


def verify_symmetry(n_points: int = 10_000, seed: int = 0, max_den: int = 60) -> VerdictReport:
    """Point reflection through ``(1/2, 0)`` commutes with one step, on random rational points."""
    rng = random.Random(seed)
    rep = VerdictReport("symmetry", {"n_points": n_points, "seed": seed, "max_den": max_den})
    bad = []
    for i in range(n_points):
        alpha = _random_rational(rng, max_den, 0, 3)
        pt = CylinderPoint(_random_rational(rng, max_den, 0, 1), _random_rational(rng, max_den, -20, 20))
        a, b = step_exact(pt, alpha), step_exact(pt.reflect(), alpha)
        if (a.x + b.x) % 1 != 0 or a.y + b.y != 0:
            bad.append(i)
    rep.check("reflected_images_sum_to_(1,0)", [], bad)
    return rep


def verify_bands(n_pairs: int = 10_000, seed: int = 0, max_q: int = 12, max_b: int = 6) -> VerdictReport:
    """Two points in one band on one level stay in a common band after a step."""
    rng = random.Random(seed)
    rep = VerdictReport("bands", {"n_pairs": n_pairs, "seed": seed})
    bad = []
    for i in range(n_pairs):
        q = rng.randint(1, max_q)
        p = rng.choice([c for c in range(1, 2 * q + 1) if math.gcd(c, q) == 1])
        b = rng.randint(1, max_b)
        a = rng.choice([c for c in range(b) if math.gcd(c, b) == 1])
        bq = b * q
        band = rng.randrange(bq)
        y = Fraction(a, b) + rng.randint(-3 * q, 3 * q)
        x1, x2 = (Fraction(band * den + rng.randrange(den), bq * den) for den in (rng.randint(1, 50), rng.randint(1, 50)))
        i1 = step_exact(CylinderPoint(x1, y), Fraction(p, q))
        i2 = step_exact(CylinderPoint(x2, y), Fraction(p, q))
        if math.floor(i1.x * bq) != math.floor(i2.x * bq):
            bad.append(i)
    rep.check("band_index_preserved", [], bad)
    return rep
