"""LP problem representation and outcome types."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from gnta.model import ContractError, Vector, dot, q, vec


@dataclass(frozen=True)
class LPProblem:
    """``rows[i] = (coeffs, bound)`` means ``coeffs . v <= bound`` over free ``v``.

    ``objective``, when present, is maximized by :func:`gnta.lp.optimize`.
    ``labels`` optionally names each row (used in reports).
    """

    num_vars: int
    rows: Tuple[Tuple[Vector, Fraction], ...] = ()
    objective: Optional[Vector] = None
    labels: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        rows = tuple((vec(a), q(b)) for a, b in self.rows)
        if any(len(a) != self.num_vars for a, _ in rows):
            raise ContractError("every row needs %d coefficients" % self.num_vars)
        object.__setattr__(self, "rows", rows)
        if self.objective is not None:
            obj = vec(self.objective)
            if len(obj) != self.num_vars:
                raise ContractError("objective needs %d coefficients" % self.num_vars)
            object.__setattr__(self, "objective", obj)
        if self.labels and len(self.labels) != len(rows):
            raise ContractError("labels must name every row")

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else "row %d" % i

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        return all(dot(a, point) <= b for a, b in self.rows)

    def with_rows(self, extra, labels: Sequence[str] = ()) -> "LPProblem":
        extra = tuple(extra)
        new_labels = ()
        if self.labels or labels:
            own = self.labels or tuple(self.label(i) for i in range(self.num_rows))
            new_labels = tuple(own) + (tuple(labels) or tuple("extra %d" % i for i in range(len(extra))))
        return LPProblem(self.num_vars, self.rows + extra, self.objective, new_labels)


@dataclass(frozen=True)
class Feasible:
    point: Vector


@dataclass(frozen=True)
class Infeasible:
    """Farkas witness ``c >= 0`` with ``c^T A = 0`` and ``c^T b < 0``."""

    certificate: Vector


@dataclass(frozen=True)
class Unbounded:
    ray: Vector


@dataclass(frozen=True)
class Optimal:
    point: Vector
    value: Fraction


@dataclass(frozen=True)
class BranchLeaf:
    """A closed branch-and-bound leaf: extra bound rows plus a Farkas witness for them."""

    bounds: Tuple[Tuple[Vector, Fraction], ...]
    certificate: Vector


@dataclass(frozen=True)
class BranchInfeasible:
    """Every leaf of the branch-and-bound tree is LP-infeasible; no integer point exists."""

    leaves: Tuple[BranchLeaf, ...]


@dataclass(frozen=True)
class DepthExceeded:
    """Branch and bound hit its depth limit; the question stays open."""

    depth_limit: int


def farkas_valid(problem: LPProblem, certificate: Sequence[Fraction]) -> bool:
    """Exact check of ``c >= 0``, ``c^T A = 0``, ``c^T b < 0``."""
    if len(certificate) != problem.num_rows:
        return False
    if any(c < 0 for c in certificate):
        return False
    combo = [Fraction(0)] * problem.num_vars
    rhs = Fraction(0)
    for c, (a, b) in zip(certificate, problem.rows):
        if c:
            for j, aj in enumerate(a):
                combo[j] += c * aj
            rhs += c * b
    return all(v == 0 for v in combo) and rhs < 0


def branch_certificate_valid(problem: LPProblem, outcome: BranchInfeasible) -> bool:
    """Check every leaf witness against the problem extended by that leaf's bounds.

    Does not re-derive that the leaves cover the integer lattice; that
    follows from the branching construction.
    """
    return bool(outcome.leaves) and all(
        farkas_valid(problem.with_rows(leaf.bounds), leaf.certificate) for leaf in outcome.leaves
    )
