"""Search for geometric nontermination arguments with lambda fixed per candidate.

For a fixed ``lam`` the conditions on ``(x0, x1, y)`` are linear, so each
candidate is one exact LP (or branch-and-bound run in integer mode).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from gnta.certs import check_gnta
from gnta.linalg import charpoly, rational_roots
from gnta.lp import (
    DEFAULT_DEPTH_LIMIT,
    BranchInfeasible,
    DepthExceeded,
    Feasible,
    Infeasible,
    LPProblem,
    solve_feasibility,
    solve_integer_feasibility,
)
from gnta.model import GNTA, ContractError, LassoProgram, LinearRelation, Vector


class StrictRowsError(ContractError):
    """A solver entry point met strict rows without closure mode."""


def default_lambda_grid() -> List[Fraction]:
    return [Fraction(v) for v in ("1", "1/2", "2", "1/3", "3", "2/3", "3/2", "1/4", "4", "5")]


@dataclass(frozen=True)
class SynthConfig:
    lambda_grid: Tuple[Fraction, ...] = field(default_factory=lambda: tuple(default_lambda_grid()))
    use_eigen_candidates: bool = True
    integer_mode: bool = False
    closure_mode: bool = False
    bnb_depth_limit: int = DEFAULT_DEPTH_LIMIT
    fixed_point_shortcut: bool = True

    def __post_init__(self) -> None:
        grid = tuple(Fraction(v) for v in self.lambda_grid)
        if any(v <= 0 for v in grid):
            raise ContractError("lambda candidates must be positive")
        object.__setattr__(self, "lambda_grid", grid)


@dataclass(frozen=True)
class Found:
    gnta: GNTA
    lambdas_tried: Tuple[Fraction, ...]


@dataclass(frozen=True)
class Attempt:
    """Why one lambda candidate failed: an LP/branch certificate or a depth cutoff."""

    lam: Fraction
    problem: LPProblem
    outcome: Union[Infeasible, BranchInfeasible, DepthExceeded]


@dataclass(frozen=True)
class NotFoundForCandidates:
    attempts: Tuple[Attempt, ...]


@dataclass(frozen=True)
class StrictRejected:
    rows: Tuple[Tuple[str, int], ...]


@dataclass(frozen=True)
class SynthReport:
    outcome: Union[Found, NotFoundForCandidates, StrictRejected]
    closure_applied: bool = False
    fixed_point_used: bool = False
    program: Optional[LassoProgram] = None

    @property
    def found(self) -> bool:
        return isinstance(self.outcome, Found)


def _strict_rows(prog: LassoProgram) -> Tuple[Tuple[str, int], ...]:
    rows = []
    if prog.stem is not None:
        rows += [("stem", i) for i, s in enumerate(prog.stem.strict) if s]
    rows += [("loop", i) for i, s in enumerate(prog.loop.strict) if s]
    return tuple(rows)


def _require_closed(rel: LinearRelation, what: str) -> None:
    if rel.has_strict:
        raise StrictRowsError("%s relation has strict rows; enable closure mode" % what)


def encode_fixed_lambda(prog: LassoProgram, lam) -> LPProblem:
    """Linear system over ``(x0, x1, y)`` (``3n`` variables) for a fixed ``lam``.

    Rows come in the order init, point, ray.  Without a stem, init is
    replaced by ``x0 = x1``.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ContractError("lambda must be positive")
    _require_closed(prog.loop, "loop")
    if prog.stem is not None:
        _require_closed(prog.stem, "stem")
    n = prog.n
    zero = Fraction(0)
    rows, labels = [], []

    def place(blocks):
        out = [zero] * (3 * n)
        for offset, coeffs in blocks:
            for j, c in enumerate(coeffs):
                out[offset + j] += c
        return tuple(out)

    if prog.stem is None:
        for j in range(n):
            e = tuple(Fraction(int(i == j)) for i in range(n))
            neg = tuple(-v for v in e)
            rows.append((place([(0, e), (n, neg)]), zero))
            labels.append("init x0=x1 [%d] <=" % j)
            rows.append((place([(0, neg), (n, e)]), zero))
            labels.append("init x0=x1 [%d] >=" % j)
    else:
        stem = prog.stem
        for i in range(stem.rows):
            rows.append((place([(0, stem.current(i)), (n, stem.primed(i))]), stem.b[i]))
            labels.append("init %d" % i)
    loop = prog.loop
    for i in range(loop.rows):
        a, p = loop.current(i), loop.primed(i)
        # A (x1, x1 + y) <= b
        rows.append((place([(n, a), (n, p), (2 * n, p)]), loop.b[i]))
        labels.append("point %d" % i)
    for i in range(loop.rows):
        a, p = loop.current(i), loop.primed(i)
        # A (y, lam y) <= 0
        rows.append((place([(2 * n, a), (2 * n, tuple(lam * v for v in p))]), zero))
        labels.append("ray %d" % i)
    return LPProblem(3 * n, tuple(rows), None, tuple(labels))


def fixed_point_problem(loop: LinearRelation) -> LPProblem:
    """``A (x, x) <= b`` over ``x``."""
    return LPProblem(
        loop.n,
        tuple((tuple(a + p for a, p in zip(loop.current(i), loop.primed(i))), loop.b[i]) for i in range(loop.rows)),
    )


def find_fixed_point(loop: LinearRelation, integer: bool = False, depth_limit: int = DEFAULT_DEPTH_LIMIT):
    """A state ``x`` with ``(x, x)`` in ``loop``, or ``None``.

    The Farkas certificate for ``None`` is available from
    ``solve_feasibility(fixed_point_problem(loop))``.
    """
    _require_closed(loop, "loop")
    problem = fixed_point_problem(loop)
    res = solve_integer_feasibility(problem, depth_limit) if integer else solve_feasibility(problem)
    return res.point if isinstance(res, Feasible) else None


def deterministic_update(loop: LinearRelation) -> Optional[Tuple[Tuple[Vector, ...], Vector]]:
    """``(M, c)`` with ``x' = M x + c`` if every primed variable has a defining equality pair."""
    n = loop.n
    defs = {}
    for i in range(loop.rows):
        for k in range(i + 1, loop.rows):
            if loop.A[k] != tuple(-v for v in loop.A[i]) or loop.b[k] != -loop.b[i]:
                continue
            primed = [j for j, v in enumerate(loop.primed(i)) if v != 0]
            if len(primed) != 1 or primed[0] in defs:
                continue
            j = primed[0]
            beta = loop.primed(i)[j]
            defs[j] = (tuple(-a / beta for a in loop.current(i)), loop.b[i] / beta)
    if len(defs) != n:
        return None
    return tuple(defs[j][0] for j in range(n)), tuple(defs[j][1] for j in range(n))


def eigen_lambda_candidates(loop: LinearRelation) -> List[Fraction]:
    """Positive rational eigenvalues of the update matrix of a deterministic loop."""
    upd = deterministic_update(loop)
    if upd is None or loop.n == 0:
        return []
    return [r for r in rational_roots(charpoly(upd[0])) if r > 0]


def _candidates(loop: LinearRelation, cfg: SynthConfig) -> List[Fraction]:
    out: List[Fraction] = []
    if cfg.use_eigen_candidates:
        out.extend(eigen_lambda_candidates(loop))
    for lam in cfg.lambda_grid:
        if lam not in out:
            out.append(lam)
    return out


def _stem_source(prog: LassoProgram, x1: Vector, cfg: SynthConfig) -> Optional[Vector]:
    """Some ``x0`` with ``(x0, x1)`` in the stem (``x1`` itself without a stem)."""
    if prog.stem is None:
        return x1
    stem = prog.stem
    rows = tuple(
        (stem.current(i), stem.b[i] - sum((p * v for p, v in zip(stem.primed(i), x1)), Fraction(0)))
        for i in range(stem.rows)
    )
    problem = LPProblem(prog.n, rows)
    res = solve_integer_feasibility(problem, cfg.bnb_depth_limit) if cfg.integer_mode else solve_feasibility(problem)
    return res.point if isinstance(res, Feasible) else None


class UnsoundResult(RuntimeError):
    """A solver answer failed the exact certificate check."""


def synthesize(prog: LassoProgram, cfg: Optional[SynthConfig] = None) -> SynthReport:
    """Fixed-point shortcut first, then lambda candidates (eigenvalues, then grid) in order."""
    cfg = cfg or SynthConfig()
    closure_applied = False
    if prog.has_strict:
        if not cfg.closure_mode:
            return SynthReport(StrictRejected(_strict_rows(prog)), program=prog)
        prog, closure_applied = prog.closed()

    def accept(gnta: GNTA) -> GNTA:
        report = check_gnta(prog, gnta)
        if not report.valid:
            raise UnsoundResult("solver produced an invalid GNTA: %s" % report.first())
        return gnta

    if cfg.fixed_point_shortcut:
        x_star = find_fixed_point(prog.loop, cfg.integer_mode, cfg.bnb_depth_limit)
        if x_star is not None:
            x0 = _stem_source(prog, x_star, cfg)
            if x0 is not None:
                n = prog.n
                gnta = accept(GNTA(x0, x_star, (Fraction(0),) * n, Fraction(1)))
                return SynthReport(Found(gnta, ()), closure_applied, True, prog)

    tried: List[Fraction] = []
    attempts: List[Attempt] = []
    n = prog.n
    for lam in _candidates(prog.loop, cfg):
        tried.append(lam)
        problem = encode_fixed_lambda(prog, lam)
        if cfg.integer_mode:
            res = solve_integer_feasibility(problem, cfg.bnb_depth_limit)
        else:
            res = solve_feasibility(problem)
        if isinstance(res, Feasible):
            v = res.point
            gnta = accept(GNTA(v[:n], v[n : 2 * n], v[2 * n :], lam))
            return SynthReport(Found(gnta, tuple(tried)), closure_applied, False, prog)
        attempts.append(Attempt(lam, problem, res))
    return SynthReport(NotFoundForCandidates(tuple(attempts)), closure_applied, False, prog)


def parse_lambda_list(text: str) -> Tuple[Fraction, ...]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        values.append(Fraction(part))
    return tuple(values)


__all__: Sequence[str] = [
    "Attempt",
    "Found",
    "NotFoundForCandidates",
    "StrictRejected",
    "StrictRowsError",
    "SynthConfig",
    "SynthReport",
    "UnsoundResult",
    "default_lambda_grid",
    "deterministic_update",
    "eigen_lambda_candidates",
    "encode_fixed_lambda",
    "find_fixed_point",
    "fixed_point_problem",
    "synthesize",
]
