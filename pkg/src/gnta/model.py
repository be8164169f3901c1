"""Exact data model: rational vectors, linear relations, lasso programs and certificates.

Rationals are :class:`fractions.Fraction` (always canonical: positive
denominator, reduced).  Vectors are plain tuples of fractions and matrices are
tuples of row tuples, so every value here is immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Rational = Fraction
Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

RationalLike = Union[Fraction, int, str]


class ContractError(ValueError):
    """Raised when an operation is called with arguments violating its contract."""


def q(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact rational; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals: %r" % value)
    return Fraction(value)


def vec(values: Iterable[RationalLike]) -> Vector:
    return tuple(q(v) for v in values)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ContractError("dimension mismatch: %d vs %d" % (len(u), len(v)))
    return sum((a * b for a, b in zip(u, v) if a), Fraction(0))


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c: Fraction, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def fmt_rational(x: Fraction) -> str:
    """Render as ``p/q`` (always with a denominator, e.g. ``10/1``)."""
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rational(text: str) -> Fraction:
    """Parse ``p``, ``p/q`` or ``-p/q``.  Decimal points are rejected."""
    if not isinstance(text, str):
        raise ContractError("rational must be given as a string, got %r" % (text,))
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ContractError("not an exact rational literal: %r" % text)
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ContractError("not a rational literal: %r" % text) from exc


@dataclass(frozen=True)
class LinearRelation:
    """A relation ``A (x, x') <= b`` over ``n`` variables with per-row strictness.

    Row ``i`` has ``2n`` coefficients: the first ``n`` act on the current
    state ``x``, the last ``n`` on the successor ``x'``.
    """

    n: int
    A: Matrix
    b: Vector
    strict: Tuple[bool, ...] = field(default=())

    def __post_init__(self) -> None:
        A = tuple(vec(row) for row in self.A)
        b = vec(self.b)
        strict = tuple(bool(s) for s in self.strict) if self.strict else (False,) * len(A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "strict", strict)
        if self.n < 0:
            raise ContractError("negative variable count")
        if any(len(row) != 2 * self.n for row in A):
            raise ContractError("every row needs exactly 2n = %d coefficients" % (2 * self.n))
        if not (len(b) == len(A) == len(strict)):
            raise ContractError("A, b and strict must have the same number of rows")

    @property
    def rows(self) -> int:
        return len(self.A)

    @property
    def has_strict(self) -> bool:
        return any(self.strict)

    def current(self, i: int) -> Vector:
        """Coefficients of row ``i`` on the unprimed variables."""
        return self.A[i][: self.n]

    def primed(self, i: int) -> Vector:
        """Coefficients of row ``i`` on the primed variables."""
        return self.A[i][self.n :]

    def row_value(self, i: int, x: Sequence[Fraction], xp: Sequence[Fraction]) -> Fraction:
        return dot(self.current(i), x) + dot(self.primed(i), xp)

    def row_holds(self, i: int, x: Sequence[Fraction], xp: Sequence[Fraction]) -> bool:
        lhs = self.row_value(i, x, xp)
        return lhs < self.b[i] if self.strict[i] else lhs <= self.b[i]


def relation_member(rel: LinearRelation, x: Sequence[RationalLike], xp: Sequence[RationalLike]) -> bool:
    """True iff ``(x, xp)`` satisfies every row of ``rel`` (strict rows strictly)."""
    if len(x) != rel.n or len(xp) != rel.n:
        raise ContractError(
            "state dimensions (%d, %d) do not match relation arity %d" % (len(x), len(xp), rel.n)
        )
    x, xp = vec(x), vec(xp)
    return all(rel.row_holds(i, x, xp) for i in range(rel.rows))


@dataclass(frozen=True)
class Closure:
    relation: LinearRelation
    changed: bool


def closure(rel: LinearRelation) -> Closure:
    """Topological closure: the same rows with every strict flag cleared."""
    changed = rel.has_strict
    if not changed:
        return Closure(rel, False)
    return Closure(LinearRelation(rel.n, rel.A, rel.b, (False,) * rel.rows), True)


@dataclass(frozen=True)
class LassoProgram:
    """Stem relation (``None`` meaning *true*) followed by a loop relation."""

    var_names: Tuple[str, ...]
    loop: LinearRelation
    stem: Optional[LinearRelation] = None

    def __post_init__(self) -> None:
        names = tuple(self.var_names)
        object.__setattr__(self, "var_names", names)
        if len(set(names)) != len(names):
            raise ContractError("variable names must be unique")
        if self.loop.n != len(names):
            raise ContractError("loop arity %d != %d variables" % (self.loop.n, len(names)))
        if self.stem is not None and self.stem.n != len(names):
            raise ContractError("stem arity %d != %d variables" % (self.stem.n, len(names)))

    @property
    def n(self) -> int:
        return len(self.var_names)

    @property
    def is_loop_program(self) -> bool:
        return self.stem is None

    @property
    def has_strict(self) -> bool:
        return self.loop.has_strict or (self.stem is not None and self.stem.has_strict)

    def closed(self) -> Tuple["LassoProgram", bool]:
        """The program with both relations closed, and whether anything changed."""
        loop = closure(self.loop)
        stem = closure(self.stem) if self.stem is not None else None
        changed = loop.changed or (stem is not None and stem.changed)
        if not changed:
            return self, False
        return LassoProgram(self.var_names, loop.relation, stem.relation if stem else None), True


@dataclass(frozen=True)
class GNTA:
    """Geometric nontermination argument ``(x0, x1, y, lambda)``."""

    x0: Vector
    x1: Vector
    y: Vector
    lam: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x0", vec(self.x0))
        object.__setattr__(self, "x1", vec(self.x1))
        object.__setattr__(self, "y", vec(self.y))
        object.__setattr__(self, "lam", q(self.lam))
        if not (len(self.x0) == len(self.x1) == len(self.y)):
            raise ContractError("x0, x1 and y must have equal dimension")

    @property
    def n(self) -> int:
        return len(self.x1)

    def to_json(self) -> dict:
        return {
            "x0": [fmt_rational(v) for v in self.x0],
            "x1": [fmt_rational(v) for v in self.x1],
            "y": [fmt_rational(v) for v in self.y],
            "lambda": fmt_rational(self.lam),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GNTA":
        if not isinstance(data, dict):
            raise ContractError("GNTA JSON must be an object")
        try:
            x0, x1, y, lam = data["x0"], data["x1"], data["y"], data["lambda"]
        except KeyError as exc:
            raise ContractError("GNTA JSON is missing key %s" % exc) from exc
        if not all(isinstance(v, list) for v in (x0, x1, y)):
            raise ContractError("x0, x1 and y must be arrays of rational strings")
        return cls(
            tuple(parse_rational(v) for v in x0),
            tuple(parse_rational(v) for v in x1),
            tuple(parse_rational(v) for v in y),
            parse_rational(lam),
        )


@dataclass(frozen=True)
class WitnessPrefix:
    """Finite prefix of the execution ``x0, x1, x1 + y, x1 + (1 + lam) y, ...``."""

    states: Tuple[Vector, ...]
    x1: Vector
    y: Vector
    lam: Fraction

    def closed_form(self, t: int) -> Vector:
        """State ``t`` for ``t >= 1`` computed from the partial geometric sum."""
        if t < 1:
            raise ContractError("closed form is defined for t >= 1")
        s = sum((self.lam ** i for i in range(t - 1)), Fraction(0))
        return vadd(self.x1, vscale(s, self.y))


@dataclass(frozen=True)
class RecurrenceSet:
    """Polyhedron ``{x : normal . x >= bound (ineqs), normal . x = value (eqs)}``."""

    n: int
    inequalities: Tuple[Tuple[Vector, Fraction], ...] = ()
    equalities: Tuple[Tuple[Vector, Fraction], ...] = ()

    def __post_init__(self) -> None:
        ineqs = tuple((vec(a), q(c)) for a, c in self.inequalities)
        eqs = tuple((vec(a), q(c)) for a, c in self.equalities)
        if any(len(a) != self.n for a, _ in ineqs + eqs):
            raise ContractError("all normals must have dimension %d" % self.n)
        object.__setattr__(self, "inequalities", ineqs)
        object.__setattr__(self, "equalities", eqs)

    def contains(self, x: Sequence[RationalLike]) -> bool:
        if len(x) != self.n:
            raise ContractError("point has dimension %d, set has %d" % (len(x), self.n))
        x = vec(x)
        return all(dot(a, x) >= c for a, c in self.inequalities) and all(
            dot(a, x) == c for a, c in self.equalities
        )

    def as_le_rows(self) -> list:
        """Rows ``(coeffs, bound)`` meaning ``coeffs . x <= bound`` describing the set."""
        rows = [(vscale(Fraction(-1), a), -c) for a, c in self.inequalities]
        for a, c in self.equalities:
            rows.append((a, c))
            rows.append((vscale(Fraction(-1), a), -c))
        return rows

    def to_json(self) -> dict:
        return {
            "ineqs": [
                {"normal": [fmt_rational(v) for v in a], "bound": fmt_rational(c)}
                for a, c in self.inequalities
            ],
            "eqs": [
                {"normal": [fmt_rational(v) for v in a], "value": fmt_rational(c)}
                for a, c in self.equalities
            ],
        }

    @classmethod
    def from_json(cls, data: dict, n: int) -> "RecurrenceSet":
        ineqs = tuple(
            (tuple(parse_rational(v) for v in e["normal"]), parse_rational(e["bound"]))
            for e in data.get("ineqs", [])
        )
        eqs = tuple(
            (tuple(parse_rational(v) for v in e["normal"]), parse_rational(e["value"]))
            for e in data.get("eqs", [])
        )
        return cls(n, ineqs, eqs)
