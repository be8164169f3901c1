"""Fourier-Motzkin elimination, used as an independent feasibility oracle.

Only practical for a handful of variables: each elimination step can square
the row count.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, Tuple

from gnta.lp.problem import LPProblem

DEFAULT_ROW_CAP = 50_000


class ResourceLimitExceeded(RuntimeError):
    pass


def _normalize(coeffs: Tuple[Fraction, ...], bound: Fraction):
    lead = next((abs(c) for c in coeffs if c), None)
    if lead is None or lead == 1:
        return coeffs, bound
    return tuple(c / lead for c in coeffs), bound / lead


def fourier_motzkin_feasible(problem: LPProblem, row_cap: int = DEFAULT_ROW_CAP) -> bool:
    """Decide feasibility of ``problem`` by eliminating every variable.

    Each row carries the set of input rows it was combined from.  A row built
    from more than ``1 + |E|`` inputs is redundant and dropped, where ``E`` is
    the set of explicitly eliminated variables together with the variables that
    cancelled out of the row implicitly (Chernikov/Imbert).
    """
    # (coeffs, bound) -> history.  Rows with equal coefficients but different
    # bounds are all kept: dropping the weaker one would break the history rule.
    rows: Dict[tuple, FrozenSet[int]] = {}

    def add(coeffs, bound, hist, into):
        key = _normalize(coeffs, bound)
        old = into.get(key)
        if old is None or len(hist) < len(old):
            into[key] = hist

    support = []
    for i, (a, b) in enumerate(problem.rows):
        support.append(frozenset(j for j, c in enumerate(a) if c))
        add(tuple(a), b, frozenset((i,)), rows)

    zero = tuple(Fraction(0) for _ in range(problem.num_vars))
    remaining = set(range(problem.num_vars))
    eliminated = set()
    while True:
        constant = [key for key in rows if key[0] == zero]
        for key in constant:
            if key[1] < 0:
                return False
            del rows[key]
        if not remaining or not rows:
            return True

        def cost(j):
            pos = sum(1 for c, _ in rows if c[j] > 0)
            neg = sum(1 for c, _ in rows if c[j] < 0)
            return pos * neg - pos - neg, j

        j = min(remaining, key=cost)
        remaining.discard(j)
        eliminated.add(j)
        pos = [(c, b, h) for (c, b), h in rows.items() if c[j] > 0]
        neg = [(c, b, h) for (c, b), h in rows.items() if c[j] < 0]
        nxt: Dict[tuple, FrozenSet[int]] = {key: h for key, h in rows.items() if key[0][j] == 0}
        for cp, bp, hp in pos:
            for cn, bn, hn in neg:
                hist = hp | hn
                # scale so the j-th coefficients cancel: |cn_j| * p + cp_j * n
                sp, sn = -cn[j], cp[j]
                coeffs = tuple(sp * x + sn * y for x, y in zip(cp, cn))
                if len(hist) > 1 + len(eliminated):
                    touched = frozenset().union(*(support[i] for i in hist))
                    gone = eliminated | {v for v in touched if coeffs[v] == 0}
                    if len(hist) > 1 + len(gone):
                        continue
                add(coeffs, sp * bp + sn * bn, hist, nxt)
                if len(nxt) > row_cap:
                    raise ResourceLimitExceeded(
                        "Fourier-Motzkin exceeded %d rows while eliminating variable %d" % (row_cap, j)
                    )
        rows = nxt
