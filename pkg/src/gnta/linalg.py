"""Small exact linear algebra helpers: characteristic polynomials, rational roots, nullspaces."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence

from gnta.model import Vector


def charpoly(M: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Coefficients ``[c_0, ..., c_n]`` of ``det(t I - M) = sum c_k t^k`` (Faddeev-LeVerrier)."""
    n = len(M)
    M = [[Fraction(v) for v in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    # N_k = M N_{k-1} + c_{n-k+1} I, starting from N_0 = 0
    N = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prev = coeffs[n - k + 1]
        N = [
            [sum((M[i][l] * N[l][j] for l in range(n)), Fraction(0)) + (prev if i == j else 0) for j in range(n)]
            for i in range(n)
        ]
        trace = sum((M[i][l] * N[l][i] for i in range(n) for l in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return coeffs


def _divisors(m: int) -> List[int]:
    m = abs(m)
    small, large = [], []
    for d in range(1, math.isqrt(m) + 1):
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
    return small + large[::-1]


def poly_eval(coeffs: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    """Distinct rational roots of ``sum coeffs[k] t^k``, ascending (rational root theorem)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    roots = set()
    lead = 0
    while coeffs[lead] == 0:
        lead += 1
    if lead:
        roots.add(Fraction(0))
    reduced = coeffs[lead:]
    if len(reduced) > 1:
        scale = math.lcm(*(c.denominator for c in reduced))
        ints = [int(c * scale) for c in reduced]
        g = math.gcd(*ints)
        ints = [v // g for v in ints]
        for p in _divisors(ints[0]):
            for qd in _divisors(ints[-1]):
                for cand in (Fraction(p, qd), Fraction(-p, qd)):
                    if cand not in roots and poly_eval(ints, cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Basis of ``{v : rows v = 0}`` from the reduced row echelon form, one vector per free column."""
    R = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pv = R[r][c]
        R[r] = [v / pv for v in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][free]
        basis.append(tuple(v))
    return basis


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    return ncols - len(nullspace(rows, ncols))
