import math
import random
from fractions import Fraction

import pytest

from dsmap.exact import CylinderPoint, step_exact
from dsmap.lattice import LatticeState, make_params


def exact_successor(params):
    """Successor table of the lattice built from the rational cylinder map only.

    Lattice points are placed at ``x = (2 + delta + 4r) / (4bq)`` directly here
    (not through ``embed``) and read back by ``floor(bq x)``.
    """
    bq, q = params.b * params.q, params.q
    delta = bq % 2
    alpha = Fraction(params.p, params.q)
    y0 = Fraction(params.a, params.b)
    succ = {}
    for j in range(q):
        for r in range(bq):
            pt = CylinderPoint(Fraction(2 + delta + 4 * r, 4 * bq), y0 + j)
            img = step_exact(pt, alpha)
            dy = img.y - pt.y
            succ[(r, j)] = ((math.floor(img.x * bq), int(img.y - y0) % q), int(dy))
    return succ


def brute_orbits(params):
    """All cycles of the exact successor table as (min (j, r), period, lift)."""
    succ = exact_successor(params)
    seen = set()
    out = []
    for start in sorted(succ, key=lambda s: (s[1], s[0])):
        if start in seen:
            continue
        s, lift, members = start, 0, []
        while True:
            members.append(s)
            seen.add(s)
            s, dy = succ[s]
            lift += dy
            if s == start:
                break
        rep = min(members, key=lambda t: (t[1], t[0]))
        out.append((rep, len(members), lift))
    return out


def random_params(rng: random.Random, max_bq: int = 60):
    while True:
        q = rng.randint(1, max_bq)
        b = rng.randint(1, max_bq // q)
        p = rng.randint(1, 3 * q)
        a = rng.randrange(b)
        if math.gcd(p, q) == 1 and math.gcd(a, b) == 1:
            return make_params(p, q, a, b)


@pytest.fixture
def q3():
    return make_params(1, 3, 0, 1)
