"""Two-phase primal simplex over exact rationals with Bland's pivoting rule.

Free variables are split as ``v = p - m`` with ``p, m >= 0`` and every row
receives a slack, giving ``[A, -A, I] (p, m, s) = b``.  Rows with a negative
right-hand side are negated and get an artificial variable for phase 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Union

from gnta.lp.problem import Feasible, Infeasible, LPProblem, Optimal, Unbounded, farkas_valid

ZERO = Fraction(0)
ONE = Fraction(1)


class SolverError(RuntimeError):
    """Internal invariant broken (e.g. a certificate failed its own exact check)."""


class _Tableau:
    def __init__(self, problem: LPProblem):
        k, m = problem.num_vars, problem.num_rows
        self.k, self.m = k, m
        self.sign: List[int] = []
        self.art_of_row: List[Optional[int]] = []
        flipped = [b < 0 for _, b in problem.rows]
        n_art = sum(flipped)
        self.n_struct = 2 * k + m
        self.ncols = self.n_struct + n_art
        self.rows: List[List[Fraction]] = []
        self.basis: List[int] = []
        art = self.n_struct
        for i, (a, b) in enumerate(problem.rows):
            s = -1 if flipped[i] else 1
            row = [ZERO] * (self.ncols + 1)
            for j, aj in enumerate(a):
                if aj:
                    row[j] = s * aj
                    row[k + j] = -s * aj
            row[2 * k + i] = Fraction(s)
            row[-1] = s * b
            self.sign.append(s)
            if flipped[i]:
                row[art] = ONE
                self.art_of_row.append(art)
                self.basis.append(art)
                art += 1
            else:
                self.art_of_row.append(None)
                self.basis.append(2 * k + i)
            self.rows.append(row)
        self.allowed = self.ncols
        self.obj: List[Fraction] = [ZERO] * (self.ncols + 1)

    def set_objective(self, cost: List[Fraction]) -> None:
        """Install reduced costs for ``cost`` (length ncols) w.r.t. the current basis."""
        obj = list(cost) + [ZERO]
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                row = self.rows[i]
                for j, v in enumerate(row):
                    if v:
                        obj[j] -= cb * v
        self.obj = obj

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        pv = prow[c]
        if pv != 1:
            prow = [v / pv for v in prow]
            self.rows[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        f = self.obj[c]
        if f:
            for j in nz:
                self.obj[j] -= f * prow[j]
        self.basis[r] = c

    def run(self) -> Optional[int]:
        """Iterate to optimality; return an unbounded entering column, else ``None``."""
        while True:
            enter = None
            for j in range(self.allowed):
                if self.obj[j] < 0:
                    enter = j
                    break
            if enter is None:
                return None
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return enter
            self.pivot(leave, enter)

    def values(self) -> List[Fraction]:
        x = [ZERO] * self.ncols
        for i, bv in enumerate(self.basis):
            x[bv] = self.rows[i][-1]
        return x

    def point(self, x: List[Fraction]):
        k = self.k
        return tuple(x[j] - x[k + j] for j in range(k))

    def farkas(self) -> tuple:
        """Certificate from phase-1 simplex multipliers (call at a positive optimum)."""
        cert = []
        for i in range(self.m):
            a = self.art_of_row[i]
            if a is None:
                pi = -self.obj[2 * self.k + i]
            else:
                pi = ONE - self.obj[a]
            cert.append(-self.sign[i] * pi)
        return tuple(cert)

    def drive_out_artificials(self) -> None:
        keep = []
        for i, bv in enumerate(self.basis):
            if bv >= self.n_struct:
                row = self.rows[i]
                col = next((j for j in range(self.n_struct) if row[j]), None)
                if col is None:
                    continue
                self.pivot(i, col)
            keep.append(i)
        if len(keep) != len(self.rows):
            self.rows = [self.rows[i] for i in keep]
            self.basis = [self.basis[i] for i in keep]
        self.allowed = self.n_struct


def _phase1(problem: LPProblem) -> Union[_Tableau, Infeasible]:
    t = _Tableau(problem)
    if t.ncols > t.n_struct:
        cost = [ZERO] * t.n_struct + [ONE] * (t.ncols - t.n_struct)
        t.set_objective(cost)
        t.run()
        if t.obj[-1] != 0:
            cert = t.farkas()
            if not farkas_valid(problem, cert):
                raise SolverError("phase 1 produced an invalid Farkas certificate")
            return Infeasible(cert)
        t.drive_out_artificials()
    return t


def solve_feasibility(problem: LPProblem) -> Union[Feasible, Infeasible]:
    """Find a point satisfying every row, or a Farkas certificate of infeasibility."""
    t = _phase1(problem)
    if isinstance(t, Infeasible):
        return t
    point = t.point(t.values())
    if not problem.satisfied_by(point):
        raise SolverError("phase 1 point violates a row")
    return Feasible(point)


def solve_mixed_feasibility(problem: LPProblem, strict: Sequence[bool]) -> Union[Feasible, Infeasible, None]:
    """Feasibility where rows flagged in ``strict`` must hold with ``<``.

    Maximizes a common slack ``t <= 1`` added to the strict rows.  Returns
    :class:`Infeasible` if even the closed system is infeasible and ``None``
    if the closed system is feasible but no point satisfies the strict rows.
    """
    if not any(strict):
        return solve_feasibility(problem)
    k = problem.num_vars
    rows = [
        (tuple(a) + ((ONE,) if s else (ZERO,)), b) for (a, b), s in zip(problem.rows, strict)
    ]
    rows.append(((ZERO,) * k + (ONE,), ONE))
    lifted = LPProblem(k + 1, rows, (ZERO,) * k + (ONE,))
    outcome = optimize(lifted)
    if isinstance(outcome, Infeasible):
        closed = solve_feasibility(problem)
        if isinstance(closed, Infeasible):
            return closed
        raise SolverError("lifted strict system infeasible while closed system is feasible")
    if outcome.value <= 0:
        closed = solve_feasibility(problem)
        return closed if isinstance(closed, Infeasible) else None
    return Feasible(outcome.point[:k])


def optimize(problem: LPProblem) -> Union[Optimal, Unbounded, Infeasible]:
    """Maximize ``problem.objective``; optimal points are basic (vertex) solutions."""
    if problem.objective is None:
        raise ValueError("optimize needs an objective")
    t = _phase1(problem)
    if isinstance(t, Infeasible):
        return t
    k = problem.num_vars
    cost = [ZERO] * t.ncols
    for j, cj in enumerate(problem.objective):
        cost[j] = -cj
        cost[k + j] = cj
    t.set_objective(cost)
    enter = t.run()
    if enter is not None:
        d = [ZERO] * t.ncols
        d[enter] = ONE
        for i, bv in enumerate(t.basis):
            d[bv] -= t.rows[i][enter]
        ray = t.point(d)
        if any(sum((a * r for a, r in zip(row, ray)), ZERO) > 0 for row, _ in problem.rows) or (
            sum((c * r for c, r in zip(problem.objective, ray)), ZERO) <= 0
        ):
            raise SolverError("unbounded ray fails its own check")
        return Unbounded(ray)
    point = t.point(t.values())
    if not problem.satisfied_by(point):
        raise SolverError("optimal point violates a row")
    value = sum((c * v for c, v in zip(problem.objective, point)), ZERO)
    return Optimal(point, value)
