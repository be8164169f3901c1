"""Depth-first branch and bound for integer feasibility."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Tuple, Union

from gnta.lp.problem import (
    BranchInfeasible,
    BranchLeaf,
    DepthExceeded,
    Feasible,
    Infeasible,
    LPProblem,
)
from gnta.lp.simplex import SolverError, solve_feasibility

DEFAULT_DEPTH_LIMIT = 64


def _unit(k: int, j: int, s: int) -> tuple:
    return tuple(Fraction(s) if i == j else Fraction(0) for i in range(k))


def solve_integer_feasibility(
    problem: LPProblem, depth_limit: int = DEFAULT_DEPTH_LIMIT
) -> Union[Feasible, Infeasible, BranchInfeasible, DepthExceeded]:
    """Search for an integral point of ``problem``.

    Branches on the lowest-index fractional coordinate, floor side first.
    Returns :class:`Infeasible` when the relaxation itself is infeasible,
    :class:`BranchInfeasible` when the whole tree closes, and
    :class:`DepthExceeded` when some branch reached ``depth_limit``.
    """
    root = solve_feasibility(problem)
    if isinstance(root, Infeasible):
        return root
    k = problem.num_vars
    leaves: List[BranchLeaf] = []
    exceeded = False
    # stack of (extra bound rows, depth); a LIFO keeps the floor branch first
    stack: List[Tuple[tuple, int]] = [((), 0)]
    while stack:
        bounds, depth = stack.pop()
        outcome = solve_feasibility(problem.with_rows(bounds)) if bounds else root
        if isinstance(outcome, Infeasible):
            leaves.append(BranchLeaf(bounds, outcome.certificate))
            continue
        point = outcome.point
        j = next((i for i, v in enumerate(point) if v.denominator != 1), None)
        if j is None:
            if not problem.satisfied_by(point):
                raise SolverError("integral point violates a row")
            return Feasible(point)
        if depth >= depth_limit:
            exceeded = True
            continue
        lo = math.floor(point[j])
        floor_row = (_unit(k, j, 1), Fraction(lo))
        ceil_row = (_unit(k, j, -1), Fraction(-(lo + 1)))
        stack.append((bounds + (ceil_row,), depth + 1))
        stack.append((bounds + (floor_row,), depth + 1))
    if exceeded:
        return DepthExceeded(depth_limit)
    return BranchInfeasible(tuple(leaves))
