"""Exact checking of nontermination certificates, executions and recurrence sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from gnta.linalg import nullspace
from gnta.lp import Feasible, LPProblem, Optimal, optimize, solve_mixed_feasibility
from gnta.model import (
    GNTA,
    ContractError,
    LassoProgram,
    LinearRelation,
    RecurrenceSet,
    Vector,
    WitnessPrefix,
    dot,
    fmt_rational,
    is_zero,
    vadd,
    vec,
    vscale,
)

TRAJECTORY_SAMPLE_CAP = 8


@dataclass(frozen=True)
class Failure:
    """One violated constraint.

    ``constraint`` is one of ``domain``, ``init``, ``point``, ``ray`` (GNTA
    checks), ``stem``, ``loop`` (executions) or ``reach``, ``membership``,
    ``successor`` (recurrence sets).  ``step`` is the state or sample index.
    """

    constraint: str
    row: Optional[int] = None
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None
    step: Optional[int] = None
    strict: bool = False

    def __str__(self) -> str:
        parts = [self.constraint]
        if self.step is not None:
            parts.append("at step %d" % self.step)
        if self.row is not None:
            parts.append("row %d" % self.row)
        if self.lhs is not None:
            parts.append(
                "%s %s %s fails" % (fmt_rational(self.lhs), "<" if self.strict else "<=", fmt_rational(self.rhs))
            )
        return ": ".join([parts[0], " ".join(parts[1:])]) if len(parts) > 1 else parts[0]

    def to_json(self) -> dict:
        out = {"constraint": self.constraint}
        if self.step is not None:
            out["step"] = self.step
        if self.row is not None:
            out["row"] = self.row
        if self.lhs is not None:
            out["lhs"] = fmt_rational(self.lhs)
            out["rhs"] = fmt_rational(self.rhs)
            out["strict"] = self.strict
        return out


@dataclass(frozen=True)
class CheckReport:
    failures: Tuple[Failure, ...] = ()
    note: str = ""
    samples: int = 0

    @property
    def valid(self) -> bool:
        return not self.failures

    def first(self) -> Optional[Failure]:
        return self.failures[0] if self.failures else None


def _check_rows(
    rel: LinearRelation,
    x: Vector,
    xp: Vector,
    tag: str,
    *,
    homogeneous: bool = False,
    respect_strict: bool = True,
    step: Optional[int] = None,
) -> List[Failure]:
    out = []
    for i in range(rel.rows):
        lhs = rel.row_value(i, x, xp)
        rhs = Fraction(0) if homogeneous else rel.b[i]
        strict = respect_strict and rel.strict[i]
        if not (lhs < rhs if strict else lhs <= rhs):
            out.append(Failure(tag, i, lhs, rhs, step, strict))
    return out


def check_gnta(prog: LassoProgram, n: GNTA) -> CheckReport:
    """Check the domain, init, point and ray conditions exactly.

    Strict rows are enforced strictly in ``init`` and ``point``; the ray
    condition is always the homogeneous non-strict one.  Under these rules the
    unrolled execution satisfies strict rows as well.
    """
    if n.n != prog.n:
        raise ContractError("certificate has dimension %d, program has %d variables" % (n.n, prog.n))
    failures: List[Failure] = []
    if not n.lam > 0:
        failures.append(Failure("domain", None, n.lam, Fraction(0)))
    if prog.stem is not None:
        failures += _check_rows(prog.stem, n.x0, n.x1, "init")
    failures += _check_rows(prog.loop, n.x1, vadd(n.x1, n.y), "point")
    failures += _check_rows(
        prog.loop, n.y, vscale(n.lam, n.y), "ray", homogeneous=True, respect_strict=False
    )
    return CheckReport(tuple(failures))


def unroll_witness(x0: Sequence, x1: Sequence, y: Sequence, lam, steps: int) -> WitnessPrefix:
    """The first ``steps + 1`` states ``x0, x1, x1 + y, x1 + (1 + lam) y, ...``."""
    if steps < 1:
        raise ContractError("steps must be at least 1")
    x0, x1, y, lam = vec(x0), vec(x1), vec(y), Fraction(lam)
    states = [x0, x1]
    power = Fraction(1)
    cur = x1
    for _ in range(steps - 1):
        cur = vadd(cur, vscale(power, y))
        states.append(cur)
        power *= lam
    return WitnessPrefix(tuple(states), x1, y, lam)


def unroll_gnta(n: GNTA, steps: int) -> WitnessPrefix:
    return unroll_witness(n.x0, n.x1, n.y, n.lam, steps)


def verify_execution(
    prog: LassoProgram, w: WitnessPrefix, strict_original: Optional[LinearRelation] = None
) -> CheckReport:
    """Check the stem pair and every consecutive loop pair of ``w``.

    With ``strict_original`` the loop pairs are checked against that relation
    (strict rows strictly) instead of ``prog.loop``.
    """
    if len(w.states) < 2:
        raise ContractError("a witness prefix needs at least two states")
    loop = strict_original if strict_original is not None else prog.loop
    if loop.n != prog.n:
        raise ContractError("strict original has the wrong arity")
    failures: List[Failure] = []
    if prog.stem is not None:
        failures += _check_rows(prog.stem, w.states[0], w.states[1], "stem", step=0)
    for t in range(1, len(w.states) - 1):
        failures += _check_rows(loop, w.states[t], w.states[t + 1], "loop", step=t)
    return CheckReport(tuple(failures))


def orthogonal_span(y: Sequence) -> List[Vector]:
    """Linearly independent vectors spanning the orthogonal complement of ``y``."""
    y = vec(y)
    n = len(y)
    if is_zero(y):
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    return nullspace([y], n)


def build_recurrence_set(n: GNTA, *, verbatim_bound: bool = False) -> RecurrenceSet:
    """Polyhedral recurrence set: the half-line (or segment for ``lam < 1``) from ``x1`` along ``y``.

    For ``lam < 1`` the trajectory is capped by its geometric limit,
    ``y . (x - x1) <= y . y / (1 - lam)``.  ``verbatim_bound=True`` uses the
    right-hand side ``y . (x1 + y / (1 - lam))`` instead, which is too tight
    whenever ``y . x1`` is negative; it is kept for regression testing.
    """
    x1, y, lam = n.x1, n.y, n.lam
    span = orthogonal_span(y)
    eqs = tuple((z, dot(z, x1)) for z in span)
    if is_zero(y):
        return RecurrenceSet(n.n, (), eqs)
    ineqs = [(y, dot(y, x1))]
    if lam < 1:
        scale = 1 / (1 - lam)
        if verbatim_bound:
            cap = dot(y, vadd(x1, vscale(scale, y)))
        else:
            cap = scale * dot(y, y)
        # y.(x - x1) <= cap  as  -y.x >= -(y.x1 + cap)
        ineqs.append((vscale(Fraction(-1), y), -(dot(y, x1) + cap)))
    return RecurrenceSet(n.n, tuple(ineqs), eqs)


def _relation_rows(rel: LinearRelation, fixed: Optional[Vector], width: int, offset: int):
    """Rows of ``rel`` over a problem with ``width`` variables.

    With ``fixed`` given, the current state is substituted and only ``x'``
    (placed at ``offset``) remains; otherwise ``(x, x')`` sit at ``offset``.
    """
    rows = []
    for i in range(rel.rows):
        coeffs = [Fraction(0)] * width
        if fixed is None:
            for j, c in enumerate(rel.A[i]):
                coeffs[offset + j] = c
            rows.append((tuple(coeffs), rel.b[i]))
        else:
            for j, c in enumerate(rel.primed(i)):
                coeffs[offset + j] = c
            rows.append((tuple(coeffs), rel.b[i] - dot(rel.current(i), fixed)))
    return rows


def _set_rows(s: RecurrenceSet, width: int, offset: int):
    rows = []
    for a, c in s.as_le_rows():
        coeffs = [Fraction(0)] * width
        coeffs[offset : offset + s.n] = a
        rows.append((tuple(coeffs), c))
    return rows


def sample_points(s: RecurrenceSet, count: int) -> List[Vector]:
    """Up to ``count`` vertex samples of ``s`` from maximizing ``+-x_j``."""
    base = LPProblem(s.n, s.as_le_rows())
    out: List[Vector] = []
    for j in range(s.n):
        for sign in (1, -1):
            if len(out) >= count:
                return out
            obj = tuple(Fraction(sign if i == j else 0) for i in range(s.n))
            res = optimize(LPProblem(s.n, base.rows, obj))
            if isinstance(res, Optimal) and res.point not in out:
                out.append(res.point)
    return out


def verify_recurrence_set(
    prog: LassoProgram, s: RecurrenceSet, sample_count: int = 8, gnta: Optional[GNTA] = None
) -> CheckReport:
    """Reachability of ``s`` through the stem plus sampled successor checks.

    Samples are the first trajectory points of ``gnta`` (when given) and LP
    vertices of ``s``; for each one an LP asks for a loop successor inside
    ``s``.  A pass is evidence, not a proof.
    """
    if s.n != prog.n:
        raise ContractError("recurrence set dimension %d != %d" % (s.n, prog.n))
    n = prog.n
    failures: List[Failure] = []

    if prog.stem is None:
        reach = solve_mixed_feasibility(LPProblem(n, _set_rows(s, n, 0)), [False] * len(s.as_le_rows()))
    else:
        rows = _relation_rows(prog.stem, None, 2 * n, 0) + _set_rows(s, 2 * n, n)
        strict = list(prog.stem.strict) + [False] * (len(rows) - prog.stem.rows)
        reach = solve_mixed_feasibility(LPProblem(2 * n, rows), strict)
    if not isinstance(reach, Feasible):
        failures.append(Failure("reach"))

    samples: List[Vector] = []
    if gnta is not None:
        k = min(sample_count, TRAJECTORY_SAMPLE_CAP)
        cur, power = gnta.x1, Fraction(1)
        for _ in range(k + 1):
            samples.append(cur)
            cur = vadd(cur, vscale(power, gnta.y))
            power *= gnta.lam
    for p in sample_points(s, sample_count):
        if p not in samples:
            samples.append(p)

    for idx, x in enumerate(samples):
        if not s.contains(x):
            failures.append(Failure("membership", step=idx))
            continue
        rows = _relation_rows(prog.loop, x, n, 0) + _set_rows(s, n, 0)
        strict = list(prog.loop.strict) + [False] * (len(rows) - prog.loop.rows)
        if not isinstance(solve_mixed_feasibility(LPProblem(n, rows), strict), Feasible):
            failures.append(Failure("successor", step=idx))
    return CheckReport(
        tuple(failures),
        note="checked %d sampled states; sampling can refute but not prove the set" % len(samples),
        samples=len(samples),
    )


__all__ = [
    "CheckReport",
    "Failure",
    "build_recurrence_set",
    "check_gnta",
    "orthogonal_span",
    "sample_points",
    "unroll_gnta",
    "unroll_witness",
    "verify_execution",
    "verify_recurrence_set",
]
