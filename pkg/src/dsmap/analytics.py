"""Escape-length sweeps, Young diagrams of periods, phase portraits and island scans."""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidArgument
from .lattice import LatticeState, ReducedParams, make_params
from .orbits import (
    DEFAULT_MEMORY_BUDGET,
    Decomposition,
    EscapeRecord,
    decompose,
    escape_length,
    period_partition,
    trace_orbit,
)

MAXVAL = 65535


@dataclass(frozen=True)
class SweepResult:
    records: Tuple[EscapeRecord, ...]

    def __post_init__(self):
        qs = [r.q for r in self.records]
        if any(b <= a for a, b in zip(qs, qs[1:])):
            raise InvalidArgument("sweep records must be strictly increasing in q")

    @property
    def mean_ratio(self) -> float:
        return float(sum((r.ratio for r in self.records), Fraction(0)) / len(self.records))

    @property
    def min_ratio(self) -> float:
        return float(min(r.ratio for r in self.records))

    @property
    def max_ratio(self) -> float:
        return float(max(r.ratio for r in self.records))


def sweep_escape_lengths(q_from: int, q_to: int, threads: int = 1) -> SweepResult:
    """Escape length for every odd ``q`` in ``[q_from, q_to]``.

    Any failing ``q`` aborts the sweep. Output order does not depend on
    ``threads``.
    """
    if not 3 <= q_from <= q_to:
        raise InvalidArgument(f"need 3 <= q_from <= q_to, got [{q_from}, {q_to}]")
    qs = [q for q in range(q_from, q_to + 1) if q % 2]
    if threads <= 1:
        records = [escape_length(q) for q in qs]
    else:
        with ThreadPoolExecutor(threads) as pool:
            records = list(pool.map(escape_length, qs))
    return SweepResult(tuple(records))


@dataclass(frozen=True)
class YoungDiagram:
    q: int
    parts: Tuple[Fraction, ...]
    bounded_only: bool = False


def young_from_decomposition(d: Decomposition, bounded_only: bool = False) -> YoungDiagram:
    q = d.params.q
    return YoungDiagram(q, tuple(Fraction(t, q) for t in period_partition(d, bounded_only)), bounded_only)


def young_diagram(
    params: ReducedParams, bounded_only: bool = False, memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> YoungDiagram:
    """Orbit periods, largest first, with both axes scaled by ``1/q``."""
    return young_from_decomposition(decompose(params, memory_budget), bounded_only)


def _height(d: YoungDiagram, t: Fraction) -> Fraction:
    i = int(t * d.q)
    return d.parts[i] if i < len(d.parts) else Fraction(0)


def diagram_distance(d1: YoungDiagram, d2: YoungDiagram) -> float:
    """Sup-norm distance between the two diagrams as step functions of ``index / q``."""
    if not d1.parts or not d2.parts:
        raise InvalidArgument("diagrams must be non-empty")
    cuts = {Fraction(i, d.q) for d in (d1, d2) for i in range(len(d.parts) + 1)}
    return float(max(abs(_height(d1, t) - _height(d2, t)) for t in cuts))


class PortraitMode(str, enum.Enum):
    PERIOD = "period"
    ESCAPE = "escape"


@dataclass(frozen=True)
class PortraitRaster:
    width: int
    height: int
    mode: PortraitMode
    pixels: np.ndarray  # uint16, shape (height, width); row 0 is the top level


def render_from_decomposition(d: Decomposition, mode: PortraitMode) -> PortraitRaster:
    mode = PortraitMode(mode)
    labels = d.labels()
    if mode is PortraitMode.ESCAPE:
        lit = np.array([o.escaping for o in d.orbits], dtype=bool)
        img = np.where(lit[labels], MAXVAL, 0)
    else:
        periods = np.array([o.period for o in d.orbits], dtype=np.int64)
        distinct = np.unique(periods)
        rank = np.searchsorted(distinct, periods)
        top = max(len(distinct) - 1, 1)
        shade = MAXVAL - (MAXVAL * rank) // top
        img = shade[labels]
    # level j is drawn on row q-1-j
    img = np.ascontiguousarray(img[::-1]).astype(np.uint16)
    return PortraitRaster(d.params.bq, d.params.q, mode, img)


def render_portrait(
    params: ReducedParams, mode: PortraitMode, memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> PortraitRaster:
    return render_from_decomposition(decompose(params, memory_budget), mode)


def island_scan(q: int, n: int, sample: int) -> List[Tuple[LatticeState, int]]:
    """Periods of orbits started on the level nearest ``q / (2n + 1)``.

    ``sample`` starts are spread evenly in ``r``. Purely observational.
    """
    if q < 3 or n < 0 or sample < 1:
        raise InvalidArgument("need q >= 3, n >= 0, sample >= 1")
    params = make_params(1, q)
    level = round(Fraction(q, 2 * n + 1)) % q
    rs = sorted({(i * q) // sample for i in range(sample)})
    return [(LatticeState(r, level), trace_orbit(LatticeState(r, level), params).period) for r in rs]
