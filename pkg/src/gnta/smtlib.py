"""SMT-LIB2 (QF_NRA) export of the GNTA constraints with symbolic lambda, and model import.

The only nonlinear terms in the script are ``(* lambda y_<v>)``, one per
program variable, appearing in the ray rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Dict, List, Tuple

from gnta.certs import check_gnta
from gnta.model import GNTA, LassoProgram, LinearRelation
from gnta.synth import StrictRowsError


class ModelError(ValueError):
    """Solver output is not a usable sat model."""


class UnsupportedModelValue(ModelError):
    def __init__(self, term: str):
        self.term = term
        super().__init__("unsupported model value term: %s" % term)


class InvalidModel(ModelError):
    """The imported assignment is not a GNTA (e.g. a rounded decimal)."""


@dataclass(frozen=True)
class SmtScript:
    text: str

    def __str__(self) -> str:
        return self.text


def literal(x: Fraction) -> str:
    """``3``, ``(/ 1 2)``, ``(- 3)``, ``(- (/ 1 2))``."""
    mag = abs(x)
    body = str(mag.numerator) if mag.denominator == 1 else "(/ %d %d)" % (mag.numerator, mag.denominator)
    return body if x >= 0 else "(- %s)" % body


def sanitize_names(names) -> Dict[str, str]:
    out: Dict[str, str] = {}
    used = set()
    for name in names:
        base = re.sub(r"[^A-Za-z0-9_]", "_", name) or "v"
        cand, k = base, 1
        while cand in used:
            cand = "%s_%d" % (base, k)
            k += 1
        used.add(cand)
        out[name] = cand
    return out


def _sum(terms: List[Tuple[Fraction, str]]) -> str:
    pos = [_scaled(c, t) for c, t in terms if c > 0]
    neg = [_scaled(-c, t) for c, t in terms if c < 0]
    if not pos and not neg:
        return "0"
    if not neg:
        return pos[0] if len(pos) == 1 else "(+ %s)" % " ".join(pos)
    if not pos:
        inner = neg[0] if len(neg) == 1 else "(+ %s)" % " ".join(neg)
        return "(- %s)" % inner
    head = pos[0] if len(pos) == 1 else "(+ %s)" % " ".join(pos)
    return "(- %s %s)" % (head, " ".join(neg))


def _scaled(c: Fraction, term: str) -> str:
    return term if c == 1 else "(* %s %s)" % (literal(c), term)


def _row_asserts(rel: LinearRelation, cur: List[str], nxt: List[str], homogeneous: bool) -> List[str]:
    out = []
    for i in range(rel.rows):
        terms = list(zip(rel.current(i), cur)) + list(zip(rel.primed(i), nxt))
        rhs = "0" if homogeneous else literal(rel.b[i])
        out.append("(assert (<= %s %s))" % (_sum(terms), rhs))
    return out


def export_qfnra(prog: LassoProgram) -> SmtScript:
    """Deterministic QF_NRA script for the GNTA conditions of ``prog``."""
    if prog.loop.has_strict or (prog.stem is not None and prog.stem.has_strict):
        raise StrictRowsError("strict rows cannot be exported; close the program first")
    ids = sanitize_names(prog.var_names)
    names = [ids[v] for v in prog.var_names]
    x0 = ["x0_" + v for v in names]
    x1 = ["x1_" + v for v in names]
    y = ["y_" + v for v in names]
    lines = ["(set-logic QF_NRA)"]
    for ident in x0 + x1 + y + ["lambda"]:
        lines.append("(declare-fun %s () Real)" % ident)
    lines.append("(assert (> lambda 0))")
    if prog.stem is not None:
        lines += _row_asserts(prog.stem, x0, x1, False)
    lines += _row_asserts(prog.loop, x1, ["(+ %s %s)" % (a, b) for a, b in zip(x1, y)], False)
    lines += _row_asserts(prog.loop, y, ["(* lambda %s)" % v for v in y], True)
    lines += ["(check-sat)", "(get-model)"]
    return SmtScript("\n".join(lines) + "\n")


_SEXP_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|(\|[^|]*\|)|(\"(?:[^\"]|\"\")*\")|([^\s()]+))")


def _read_sexps(text: str) -> list:
    stack: list = [[]]
    pos = 0
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip():
                raise ModelError("cannot tokenize solver output near %r" % text[pos : pos + 20])
            break
        pos = m.end()
        comment, lpar, rpar, quoted, string, atom = m.groups()
        if comment or string:
            continue
        if lpar:
            stack.append([])
        elif rpar:
            if len(stack) == 1:
                raise ModelError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(quoted[1:-1] if quoted else atom)
    if len(stack) != 1:
        raise ModelError("unbalanced '(' in solver output")
    return stack[0]


def _show(term) -> str:
    if isinstance(term, list):
        return "(" + " ".join(_show(t) for t in term) + ")"
    return term


def model_value(term) -> Fraction:
    """Evaluate a numeral, finite decimal, ``(- t)`` or ``(/ p q)`` term exactly."""
    if isinstance(term, str):
        if re.fullmatch(r"\d+", term):
            return Fraction(int(term))
        if re.fullmatch(r"\d+\.\d+", term):
            try:
                return Fraction(Decimal(term))
            except InvalidOperation:  # pragma: no cover - regex guarantees a decimal
                pass
        raise UnsupportedModelValue(term)
    if len(term) == 2 and term[0] == "-":
        return -model_value(term[1])
    if len(term) == 3 and term[0] == "/":
        den = model_value(term[2])
        if den == 0:
            raise UnsupportedModelValue(_show(term))
        return model_value(term[1]) / den
    raise UnsupportedModelValue(_show(term))


def _assignments(sexps: list) -> Dict[str, object]:
    found: Dict[str, object] = {}

    def walk(node):
        if not isinstance(node, list):
            return
        if len(node) == 5 and node[0] == "define-fun" and node[2] == [] and node[3] == "Real":
            found[node[1]] = node[4]
            return
        if len(node) == 2 and isinstance(node[0], str) and node[0] not in ("-", "/", "model"):
            # get-value style pair (name value)
            if re.fullmatch(r"(x0|x1|y)_\w+|lambda", node[0]):
                found[node[0]] = node[1]
                return
        for child in node:
            walk(child)

    for node in sexps:
        walk(node)
    return found


def import_model(text: str, prog: LassoProgram) -> GNTA:
    """Turn ``sat`` solver output into a checked :class:`GNTA`.

    Variables the model omits are taken as 0.  Without a stem ``x0`` is set
    to ``x1``.  Raises :class:`InvalidModel` if the result fails the exact
    check.
    """
    sexps = _read_sexps(text)
    if not sexps or sexps[0] != "sat":
        status = sexps[0] if sexps and isinstance(sexps[0], str) else "no status"
        raise ModelError("solver did not report sat (got %s)" % status)
    values = _assignments(sexps[1:])
    if "lambda" not in values:
        raise ModelError("model does not assign lambda")
    ids = sanitize_names(prog.var_names)

    def get(prefix: str):
        return tuple(
            model_value(values[prefix + ids[v]]) if prefix + ids[v] in values else Fraction(0)
            for v in prog.var_names
        )

    x1, y = get("x1_"), get("y_")
    x0 = x1 if prog.stem is None else get("x0_")
    gnta = GNTA(x0, x1, y, model_value(values["lambda"]))
    report = check_gnta(prog, gnta)
    if not report.valid:
        raise InvalidModel("imported assignment is not a GNTA: %s" % report.first())
    return gnta
