"""CSV, JSON and PGM persistence.

All text is written with ``'\\n'`` line endings and ``'.'`` decimals, whatever
the locale.
"""
from __future__ import annotations

import csv
import io
import os
from fractions import Fraction
from typing import List, Union

import numpy as np

from .analytics import MAXVAL, PortraitMode, PortraitRaster, SweepResult, YoungDiagram
from .errors import InvalidArgument
from .lattice import LatticeState, ReducedParams
from .orbits import Decomposition, EscapeRecord, Orbit

PathLike = Union[str, os.PathLike]

SWEEP_HEADER = ["q", "ell", "ratio"]
DECOMPOSITION_HEADER = ["r", "j", "orbit_id", "period", "winding"]
YOUNG_HEADER = ["q", "part_index", "scaled_part_num", "scaled_part_den"]


def format_ratio(x: Fraction) -> str:
    return format(float(x), ".17g")


def _write_rows(path: PathLike, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_rows(path: PathLike, header) -> List[List[str]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != header:
        raise InvalidArgument(f"{path}: expected header {','.join(header)}")
    return rows[1:]


def sweep_rows(result: SweepResult):
    return [[r.q, r.ell, format_ratio(r.ratio)] for r in result.records]


def write_sweep(result: SweepResult, path: PathLike) -> None:
    _write_rows(path, SWEEP_HEADER, sweep_rows(result))


def read_sweep(path: PathLike) -> SweepResult:
    records = []
    for q, ell, ratio in _read_rows(path, SWEEP_HEADER):
        rec = EscapeRecord(int(q), int(ell))
        if format_ratio(rec.ratio) != ratio:
            raise InvalidArgument(f"{path}: ratio {ratio} does not match {ell}/{q}^2")
        records.append(rec)
    return SweepResult(tuple(records))


def write_decomposition(d: Decomposition, path: PathLike) -> None:
    """One row per lattice state, ordered by level then band."""
    labels = d.labels()
    periods = [o.period for o in d.orbits]
    windings = [o.winding for o in d.orbits]
    bq = d.params.bq
    with open(path, "w", newline="") as fh:
        fh.write(",".join(DECOMPOSITION_HEADER) + "\n")
        buf = io.StringIO()
        for j in range(d.params.q):
            row = labels[j]
            for r in range(bq):
                k = int(row[r])
                buf.write(f"{r},{j},{k},{periods[k]},{windings[k]}\n")
            fh.write(buf.getvalue())
            buf.seek(0)
            buf.truncate()


def read_decomposition(path: PathLike, params: ReducedParams) -> Decomposition:
    """Rebuild the orbit summary (representatives, periods, windings) from a state table."""
    reps, info, total = {}, {}, 0
    for r, j, k, period, winding in _read_rows(path, DECOMPOSITION_HEADER):
        r, j, k = int(r), int(j), int(k)
        total += 1
        info.setdefault(k, (int(period), int(winding)))
        if k not in reps or (j, r) < reps[k]:
            reps[k] = (j, r)
    orbits = [Orbit(LatticeState(reps[k][1], reps[k][0]), *info[k]) for k in sorted(reps)]
    return Decomposition(params, orbits, total)


def write_young(d: YoungDiagram, path: PathLike) -> None:
    _write_rows(path, YOUNG_HEADER, [[d.q, i, x.numerator, x.denominator] for i, x in enumerate(d.parts)])


def read_young(path: PathLike, bounded_only: bool = False) -> YoungDiagram:
    rows = _read_rows(path, YOUNG_HEADER)
    if not rows:
        raise InvalidArgument(f"{path}: empty diagram")
    q = int(rows[0][0])
    return YoungDiagram(q, tuple(Fraction(int(n), int(m)) for _, _, n, m in rows), bounded_only)


def pgm_bytes(raster: PortraitRaster) -> bytes:
    header = f"P5\n{raster.width} {raster.height}\n{MAXVAL}\n".encode("ascii")
    return header + raster.pixels.astype(">u2").tobytes()


def write_pgm(raster: PortraitRaster, path: PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(raster))


def read_pgm(path: PathLike, mode: PortraitMode = PortraitMode.PERIOD) -> PortraitRaster:
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P5" or int(parts[3]) != MAXVAL:
        raise InvalidArgument(f"{path}: not a 16-bit P5 PGM")
    w, h = int(parts[1]), int(parts[2])
    body = parts[4]
    pixels = np.frombuffer(body, dtype=">u2", count=w * h).reshape(h, w).astype(np.uint16)
    return PortraitRaster(w, h, PortraitMode(mode), pixels)


def write_verdict(report, path: PathLike) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(report.to_json())
