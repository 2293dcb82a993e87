"""Exit criteria. Each test prints one ``ACCEPT`` line with its verdict.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
when output capture is on).
"""
import math
import random
import time

import numpy as np
import pytest

from dsmap import io
from dsmap.analytics import PortraitMode, render_portrait, sweep_escape_lengths
from dsmap.exact import iterate_exact
from dsmap.lattice import LatticeState, embed, make_params, project, step_lattice
from dsmap.orbits import decompose, escape_length
from dsmap.theory import (
    count_period4,
    search_escape_seed,
    verify_bands,
    verify_boundedness_theorem,
    verify_dwell,
    verify_lower_bound,
    verify_q4k2,
    verify_symmetry,
    verify_window_bound,
)

from conftest import random_params

TABLE_B = {1: 3, 2: 13, 3: 11, 4: 45, 5: 57, 6: 103}
TABLE_A = {1: 1, 2: 4, 3: 4, 4: 1, 5: 26, 6: 36}


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile (or load cached) kernels so timed criteria measure the work only
    escape_length(3)
    decompose(make_params(1, 4))


@pytest.fixture
def accept(capsys):
    def report(n, ok, detail, seconds):
        with capsys.disabled():
            print(f"\nACCEPT {n:>2} {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}")
        return ok

    return report


def test_01_escape_length_991(accept):
    t = time.perf_counter()
    ell = escape_length(991).ell
    dt = time.perf_counter() - t
    ok = ell == 414639 and dt < 1.0
    assert accept(1, ok, f"ell(991) = {ell} (expected 414639, target < 1 s)", dt)


def test_02_decomposition_992(accept):
    t = time.perf_counter()
    d = decompose(make_params(1, 992))
    dt = time.perf_counter() - t
    esc = len(d.escaping)
    top = max(o.period for o in d.orbits)
    ok = esc == 0 and top == 6168 and dt < 30.0
    assert accept(2, ok, f"q=992: escaping = {esc}, max period = {top} (expected 0, 6168, target < 30 s)", dt)


def test_03_mean_ratio(accept):
    t = time.perf_counter()
    s = sweep_escape_lengths(101, 499)
    dt = time.perf_counter() - t
    ok = 0.38 <= s.mean_ratio <= 0.48 and len(s.records) == 200
    assert accept(3, ok, f"mean ell/q^2 over {len(s.records)} odd q in [101, 499] = {s.mean_ratio:.4f} "
                         f"(band [0.38, 0.48]; min {s.min_ratio:.4f}, max {s.max_ratio:.4f})", dt)


def test_04_boundedness_sweep(accept):
    t = time.perf_counter()
    failed = [q for q in range(1, 201) if not verify_boundedness_theorem(make_params(1, q)).passed]
    dt = time.perf_counter() - t
    assert accept(4, not failed, f"q = 1..200: even q bounded, odd q one odd-period escaping orbit; failures {failed}", dt)


def test_05_escape_seed_table(accept):
    t = time.perf_counter()
    found = {k: search_escape_seed(k, 120) for k in TABLE_B}
    dt = time.perf_counter() - t
    got_b = {k: v[0] if v else None for k, v in found.items()}
    got_a = {k: v[1] if v else None for k, v in found.items()}
    ok = got_b == TABLE_B
    same_a = [k for k in TABLE_A if got_a[k] == TABLE_A[k]]
    assert accept(5, ok, f"minimal b = {list(got_b.values())} (expected {list(TABLE_B.values())}); "
                         f"a = {list(got_a.values())}, agrees with table for k in {same_a}", dt)


def test_06_q4k2(accept):
    t = time.perf_counter()
    failed = [k for k in range(1, 51) if not verify_q4k2(k, 10**5).passed]
    dt = time.perf_counter() - t
    assert accept(6, not failed, f"k = 1..50: escape from (4k-1, 2k+1) and mod-4 invariant; failures {failed}", dt)


def test_07_lower_bound(accept):
    t = time.perf_counter()
    rep = verify_lower_bound(2001)
    dt = time.perf_counter() - t
    bad = [c.id for c in rep.failures()]
    assert accept(7, rep.passed and len(rep.cases) == 1000,
                  f"lower-bound sum <= ell(q) for {len(rep.cases)} odd q <= 2001; failures {bad}", dt)


def test_08_dwell(accept):
    t = time.perf_counter()
    rep = verify_dwell(99)
    dt = time.perf_counter() - t
    bad = [c.id for c in rep.failures()]
    assert accept(8, rep.passed, f"dwell count >= floor((q-1)/2m) - 1 for {len(rep.cases)} (q, m, s); failures {bad}", dt)


def test_09_window(accept):
    t = time.perf_counter()
    reps = {q: verify_window_bound(q) for q in (101, 331, 991)}
    dt = time.perf_counter() - t
    detail = ", ".join(f"q={q}: W={r.params['W']} osc={r.cases[0].observed}" for q, r in reps.items())
    assert accept(9, all(r.passed for r in reps.values()), f"lift oscillation < q over windows ({detail})", dt)


def test_10_period4(accept):
    t = time.perf_counter()
    counts = {k: count_period4(k) for k in range(1, 26)}
    dt = time.perf_counter() - t
    bad = {k: c for k, c in counts.items() if c != 2 * k - 1}
    assert accept(10, not bad, f"period-4 orbits = 2k-1 for k = 1..25; mismatches {bad}", dt)


def test_11_oracle_equivalence(accept):
    t = time.perf_counter()
    rng = random.Random(2024)
    mismatches = []
    for case in range(50):
        params = random_params(rng, 60)
        s = LatticeState(rng.randrange(params.bq), rng.randrange(params.q))
        exact = iterate_exact(embed(s, params), params.alpha, 10_000)
        for prev, nxt in zip(exact, exact[1:]):
            s, dj = step_lattice(s, params)
            if project(nxt, params) != s or nxt.y - prev.y != dj:
                mismatches.append(case)
                break
    fast = [q for q in range(3, 302, 2) if escape_length(q).ell != decompose(make_params(1, q)).escaping[0].period]
    dt = time.perf_counter() - t
    ok = not mismatches and not fast
    assert accept(11, ok, f"exact vs lattice over 50 x 10^4 steps: mismatches {mismatches}; "
                          f"fast ell vs decomposition for odd q <= 301: mismatches {fast}", dt)


def test_12_property_suites(accept, tmp_path):
    t = time.perf_counter()
    sym = verify_symmetry(10_000, seed=12)
    bands = verify_bands(10_000, seed=12)
    rng = random.Random(12)
    runs = [make_params(1, q) for q in range(1, 121)] + [random_params(rng, 60) for _ in range(50)]
    incomplete = [p.as_dict() for p in runs if sum(o.period for o in decompose(p).orbits) != p.n_states]
    identical = True
    for mode in PortraitMode:
        a, b = tmp_path / f"{mode.value}-a.pgm", tmp_path / f"{mode.value}-b.pgm"
        io.write_pgm(render_portrait(make_params(1, 991), mode), a)
        io.write_pgm(render_portrait(make_params(1, 991), mode), b)
        identical &= a.read_bytes() == b.read_bytes()
    dt = time.perf_counter() - t
    ok = sym.passed and bands.passed and not incomplete and identical
    assert accept(12, ok, f"symmetry {'ok' if sym.passed else 'FAIL'} (10^4 points), bands "
                          f"{'ok' if bands.passed else 'FAIL'} (10^4 pairs), partition complete on {len(runs)} "
                          f"decompositions ({len(incomplete)} failures), PGM byte-identical: {identical}", dt)
