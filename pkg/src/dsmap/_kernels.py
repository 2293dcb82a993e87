"""Compiled inner loops over the lattice map.

Every kernel takes ``inc[j] = p (a + b j) mod bq`` precomputed with Python
integers, so the loops only ever see values below ``2 bq``. A state ``(r, j)``
is stored at flat index ``j * bq + r``. A step moves up exactly when
``r' >= bq // 2`` (the lattice midpoints never touch ``x = 1/2``).
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def trace(r0, j0, inc, bq, q, max_steps):
    """Follow one orbit back to its start.

    Returns (period, lift, rep_r, rep_j); period is -1 when max_steps is hit.
    The representative is the lexicographic minimum of (j, r) on the cycle.
    """
    half = bq // 2
    r = r0
    j = j0
    lift = 0
    rep_r = r0
    rep_j = j0
    n = 0
    while True:
        r += inc[j]
        if r >= bq:
            r -= bq
        if r >= half:
            j += 1
            lift += 1
            if j == q:
                j = 0
        else:
            j -= 1
            lift -= 1
            if j < 0:
                j = q - 1
        n += 1
        if r == r0 and j == j0:
            return n, lift, rep_r, rep_j
        if j < rep_j or (j == rep_j and r < rep_r):
            rep_r = r
            rep_j = j
        if n >= max_steps:
            return -1, lift, rep_r, rep_j


@njit(cache=True, nogil=True)
def _grow(arr, size):
    out = np.empty(size, dtype=np.int64)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True, nogil=True)
def decompose(inc, bq, q, stop_at_escape):
    """Partition Z_bq x Z_q into cycles, scanning j-major then r.

    The first unvisited state met in that order is the minimum of its cycle,
    so representatives come out sorted. Returns (count, rep_r, rep_j, period,
    lift) with the arrays valid up to ``count``; count is -1 if a cycle failed
    to close (which a bijection cannot do).
    """
    n_states = bq * q
    visited = np.zeros((n_states + 7) >> 3, dtype=np.uint8)
    half = bq // 2
    cap = 1024
    reps_r = np.empty(cap, dtype=np.int64)
    reps_j = np.empty(cap, dtype=np.int64)
    periods = np.empty(cap, dtype=np.int64)
    lifts = np.empty(cap, dtype=np.int64)
    count = 0
    for j0 in range(q):
        base = j0 * bq
        for r0 in range(bq):
            idx = base + r0
            if visited[idx >> 3] & (1 << (idx & 7)):
                continue
            r = r0
            j = j0
            lift = 0
            n = 0
            while True:
                idx = j * bq + r
                visited[idx >> 3] |= 1 << (idx & 7)
                r += inc[j]
                if r >= bq:
                    r -= bq
                if r >= half:
                    j += 1
                    lift += 1
                    if j == q:
                        j = 0
                else:
                    j -= 1
                    lift -= 1
                    if j < 0:
                        j = q - 1
                n += 1
                if r == r0 and j == j0:
                    break
                if n > n_states:
                    return -1, reps_r, reps_j, periods, lifts
            if count == cap:
                cap *= 2
                reps_r = _grow(reps_r, cap)
                reps_j = _grow(reps_j, cap)
                periods = _grow(periods, cap)
                lifts = _grow(lifts, cap)
            reps_r[count] = r0
            reps_j[count] = j0
            periods[count] = n
            lifts[count] = lift
            count += 1
            if stop_at_escape and lift != 0:
                return count, reps_r, reps_j, periods, lifts
    return count, reps_r, reps_j, periods, lifts


@njit(cache=True, nogil=True)
def label(inc, bq, q, reps_r, reps_j, periods):
    """Return an int32 array mapping each flat state index to its orbit index."""
    out = np.empty(bq * q, dtype=np.int32)
    half = bq // 2
    for k in range(reps_r.shape[0]):
        r = reps_r[k]
        j = reps_j[k]
        for _ in range(periods[k]):
            out[j * bq + r] = k
            r += inc[j]
            if r >= bq:
                r -= bq
            if r >= half:
                j += 1
                if j == q:
                    j = 0
            else:
                j -= 1
                if j < 0:
                    j = q - 1
    return out


@njit(cache=True, nogil=True)
def lifted_path(r0, j0, inc, bq, q, n):
    """Return (rs, js, lifts) for the first n+1 points of the orbit of (r0, j0)."""
    half = bq // 2
    rs = np.empty(n + 1, dtype=np.int64)
    js = np.empty(n + 1, dtype=np.int64)
    lifts = np.empty(n + 1, dtype=np.int64)
    r = r0
    j = j0
    lift = 0
    rs[0] = r
    js[0] = j
    lifts[0] = 0
    for i in range(1, n + 1):
        r += inc[j]
        if r >= bq:
            r -= bq
        if r >= half:
            j += 1
            lift += 1
            if j == q:
                j = 0
        else:
            j -= 1
            lift -= 1
            if j < 0:
                j = q - 1
        rs[i] = r
        js[i] = j
        lifts[i] = lift
    return rs, js, lifts
