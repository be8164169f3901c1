"""Exact linear constraint solving."""

from gnta.lp.fourier_motzkin import ResourceLimitExceeded, fourier_motzkin_feasible
from gnta.lp.integer import DEFAULT_DEPTH_LIMIT, solve_integer_feasibility
from gnta.lp.problem import (
    BranchInfeasible,
    BranchLeaf,
    DepthExceeded,
    Feasible,
    Infeasible,
    LPProblem,
    Optimal,
    Unbounded,
    branch_certificate_valid,
    farkas_valid,
)
from gnta.lp.simplex import SolverError, optimize, solve_feasibility, solve_mixed_feasibility

__all__ = [
    "BranchInfeasible",
    "BranchLeaf",
    "DEFAULT_DEPTH_LIMIT",
    "DepthExceeded",
    "Feasible",
    "Infeasible",
    "LPProblem",
    "Optimal",
    "ResourceLimitExceeded",
    "SolverError",
    "Unbounded",
    "branch_certificate_valid",
    "farkas_valid",
    "fourier_motzkin_feasible",
    "optimize",
    "solve_feasibility",
    "solve_integer_feasibility",
    "solve_mixed_feasibility",
]
