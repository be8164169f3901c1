"""Seeded random lasso programs for property and acceptance tests."""

import random
from fractions import Fraction

from gnta.model import LassoProgram, LinearRelation

COEFFS = [Fraction(v) for v in ("-1", "0", "0", "1", "2", "1/2", "-2")]


def _rand_row(rng, width, lo=-3, hi=3):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(width)), Fraction(rng.randint(-5, 5))


def _guard(rng, n):
    a = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    return tuple(a) + (Fraction(0),) * n, Fraction(rng.randint(-6, 6))


def _deterministic(rng, n, max_rows):
    rows = []
    for j in range(n):
        m = [rng.choice(COEFFS) for _ in range(n)]
        c = Fraction(rng.randint(-2, 2))
        # x'_j - m.x <= c  and  its negation
        le = tuple(-v for v in m) + tuple(Fraction(int(i == j)) for i in range(n))
        rows.append((le, c))
        rows.append((tuple(-v for v in le), -c))
    while len(rows) < max_rows and rng.random() < 0.7:
        rows.append(_guard(rng, n))
    return rows


def _nondeterministic(rng, n, max_rows):
    rows = []
    for j in range(n):
        if rng.random() < 0.5:
            m = [rng.choice(COEFFS) for _ in range(n)]
            le = tuple(-v for v in m) + tuple(Fraction(int(i == j)) for i in range(n))
            c = Fraction(rng.randint(-2, 2))
            rows.append((le, c))
            if rng.random() < 0.5:
                rows.append((tuple(-v for v in le), -c - rng.randint(0, 2)))
    while len(rows) < max_rows and (not rows or rng.random() < 0.6):
        rows.append(_guard(rng, n) if rng.random() < 0.5 else _rand_row(rng, 2 * n))
    return rows[:max_rows]


def random_program(rng, with_stem=False, max_rows=8):
    n = rng.randint(1, 3)
    kind = rng.random()
    if kind < 0.45:
        rows = _deterministic(rng, n, max_rows)
    elif kind < 0.8:
        rows = _nondeterministic(rng, n, max_rows)
    else:
        rows = [_rand_row(rng, 2 * n) for _ in range(rng.randint(1, max_rows))]
    loop = LinearRelation(n, tuple(r[0] for r in rows), tuple(r[1] for r in rows))
    stem = None
    if with_stem:
        srows = [_rand_row(rng, 2 * n) for _ in range(rng.randint(1, 3))]
        stem = LinearRelation(n, tuple(r[0] for r in srows), tuple(r[1] for r in srows))
    names = ("a", "b", "c")[:n]
    return LassoProgram(names, loop, stem)


def corpus(seed=2024, loops=520, lassos=120):
    """``loops`` linear loop programs followed by ``lassos`` programs with stems."""
    rng = random.Random(seed)
    out = [random_program(rng) for _ in range(loops)]
    out += [random_program(rng, with_stem=True) for _ in range(lassos)]
    return out
