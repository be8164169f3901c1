"""Reader and writer for the ``.lasso`` text format.

A program looks like::

    vars: a b
    stem:            # optional
      b >= 0
    loop:
      a >= 7
      a' = b
      b' = b + 1

Constraints are affine comparisons between linear expressions, one per line.
Primed names denote successor values; in the stem they denote the state the
loop is entered with.  Updates are relational and simultaneous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from gnta.model import LassoProgram, LinearRelation

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><=|>=|<|>|=)
  | (?P<sym>[+\-*/])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'?)
    """,
    re.VERBOSE,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class SourceProgram:
    text: str
    origin: str = "<string>"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def format(self, origin: str = "<string>") -> str:
        return "%s:%d:%d: %s: %s" % (origin, self.line, self.column, self.severity, self.message)


class ParseError(ValueError):
    def __init__(self, diagnostics: List[ParseDiagnostic], origin: str = "<string>"):
        self.diagnostics = diagnostics
        self.origin = origin
        super().__init__("\n".join(d.format(origin) for d in diagnostics))


@dataclass
class ParseResult:
    program: LassoProgram
    diagnostics: List[ParseDiagnostic] = field(default_factory=list)

    @property
    def warnings(self) -> List[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "warning"]


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


class _LineError(Exception):
    def __init__(self, col: int, message: str):
        self.col = col
        self.message = message


def _tokenize(text: str, col0: int) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _LineError(col0 + pos, "unexpected character %r" % text[pos])
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), col0 + pos))
        pos = m.end()
    return toks


class _ConstraintParser:
    """Recursive-descent parser for one ``linexpr relop linexpr`` line."""

    def __init__(self, toks: List[_Tok], index: Dict[str, int], end_col: int):
        self.toks = toks
        self.pos = 0
        self.index = index
        self.end_col = end_col

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise _LineError(self.end_col, "unexpected end of constraint")
        self.pos += 1
        return tok

    def rational(self) -> Fraction:
        tok = self.take()
        if tok.kind != "int":
            raise _LineError(tok.col, "expected a number, found %r" % tok.text)
        value = Fraction(int(tok.text))
        nxt = self.peek()
        if nxt is not None and nxt.text == "/":
            self.take()
            den = self.take()
            if den.kind != "int" or int(den.text) == 0:
                raise _LineError(den.col, "denominator must be a positive integer")
            value /= int(den.text)
        return value

    def var(self) -> int:
        tok = self.take()
        if tok.kind != "ident":
            raise _LineError(tok.col, "expected a variable, found %r" % tok.text)
        primed = tok.text.endswith("'")
        name = tok.text.rstrip("'")
        if name not in self.index:
            raise _LineError(tok.col, "unknown identifier %r" % name)
        return self.index[name] + (len(self.index) if primed else 0)

    def term(self, sign: Fraction, coeffs: Dict[int, Fraction]) -> Fraction:
        tok = self.peek()
        if tok is None:
            raise _LineError(self.end_col, "expected a term")
        if tok.kind == "int":
            c = self.rational()
            nxt = self.peek()
            if nxt is not None and nxt.text == "*":
                self.take()
                nxt = self.peek()
                if nxt is None or nxt.kind != "ident":
                    raise _LineError(nxt.col if nxt else self.end_col, "expected a variable after '*'")
            if nxt is not None and nxt.kind == "ident":
                j = self.var()
                coeffs[j] = coeffs.get(j, Fraction(0)) + sign * c
                self._no_product()
                return Fraction(0)
            return sign * c
        if tok.kind == "ident":
            j = self.var()
            coeffs[j] = coeffs.get(j, Fraction(0)) + sign
            self._no_product()
            return Fraction(0)
        raise _LineError(tok.col, "expected a term, found %r" % tok.text)

    def _no_product(self) -> None:
        nxt = self.peek()
        if nxt is None:
            return
        if nxt.kind in ("ident", "int") or nxt.text in ("*", "/"):
            raise _LineError(nxt.col, "non-linear term: only a constant may multiply a variable")

    def linexpr(self) -> Tuple[Dict[int, Fraction], Fraction]:
        coeffs: Dict[int, Fraction] = {}
        const = Fraction(0)
        sign = Fraction(1)
        tok = self.peek()
        if tok is not None and tok.text == "-":
            self.take()
            sign = Fraction(-1)
        const += self.term(sign, coeffs)
        while True:
            tok = self.peek()
            if tok is None or tok.text not in ("+", "-"):
                return coeffs, const
            self.take()
            const += self.term(Fraction(1) if tok.text == "+" else Fraction(-1), coeffs)

    def constraint(self):
        lhs, lc = self.linexpr()
        op = self.take()
        if op.kind != "op":
            raise _LineError(op.col, "expected a comparison operator, found %r" % op.text)
        rhs, rc = self.linexpr()
        extra = self.peek()
        if extra is not None:
            raise _LineError(extra.col, "unexpected %r after constraint" % extra.text)
        return lhs, lc, op, rhs, rc


def _row(width: int, lhs, lc, rhs, rc, flip: bool):
    """``lhs - rhs <= 0`` as ``(coeffs, bound)``; ``flip`` gives ``rhs - lhs <= 0``."""
    s = Fraction(-1) if flip else Fraction(1)
    coeffs = [Fraction(0)] * width
    for j, c in lhs.items():
        coeffs[j] += s * c
    for j, c in rhs.items():
        coeffs[j] -= s * c
    return tuple(coeffs), -s * (lc - rc)


def parse(src: Union[SourceProgram, str], origin: Optional[str] = None) -> ParseResult:
    """Parse ``.lasso`` text into a :class:`LassoProgram`.

    Raises :class:`ParseError` carrying every positioned error found.  Strict
    comparisons are accepted but produce warnings.
    """
    if isinstance(src, str):
        src = SourceProgram(src, origin or "<string>")
    errors: List[ParseDiagnostic] = []
    warnings: List[ParseDiagnostic] = []
    names: Optional[List[str]] = None
    index: Dict[str, int] = {}
    sections: Dict[str, list] = {}
    current: Optional[str] = None
    loop_line = 0
    loop_lines = 0

    for lineno, raw in enumerate(src.text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col0 = len(body) - len(body.lstrip()) + 1
        head = stripped.split(":", 1)[0].strip() if ":" in stripped else None
        if head in ("vars", "stem", "loop"):
            rest = stripped.split(":", 1)[1]
            rest_col = col0 + stripped.index(":") + 1
            if head == "vars":
                if names is not None:
                    errors.append(ParseDiagnostic(lineno, col0, "duplicate 'vars:' header"))
                    continue
                names = []
                for m in re.finditer(r"\S+", rest):
                    word, col = m.group(), rest_col + m.start()
                    if word.endswith("'") and _IDENT.match(word[:-1]):
                        errors.append(ParseDiagnostic(lineno, col, "primed variable %r in 'vars:'" % word))
                    elif not _IDENT.match(word):
                        errors.append(ParseDiagnostic(lineno, col, "invalid variable name %r" % word))
                    elif word in index:
                        errors.append(ParseDiagnostic(lineno, col, "duplicate variable %r" % word))
                    else:
                        index[word] = len(names)
                        names.append(word)
                continue
            if names is None:
                errors.append(ParseDiagnostic(lineno, col0, "'%s:' before 'vars:' header" % head))
                names = []
            if rest.strip():
                errors.append(ParseDiagnostic(lineno, rest_col, "'%s:' must stand on its own line" % head))
            if head in sections:
                errors.append(ParseDiagnostic(lineno, col0, "duplicate '%s:' section" % head))
            elif head == "stem" and "loop" in sections:
                errors.append(ParseDiagnostic(lineno, col0, "'stem:' must come before 'loop:'"))
            sections.setdefault(head, [])
            current = head
            if head == "loop":
                loop_line = lineno
            continue
        if names is None:
            errors.append(ParseDiagnostic(lineno, col0, "expected 'vars:' header"))
            names = []
            continue
        if current is None:
            errors.append(ParseDiagnostic(lineno, col0, "constraint outside of 'stem:' or 'loop:'"))
            continue
        if current == "loop":
            loop_lines += 1
        try:
            toks = _tokenize(body, 1)
            parser = _ConstraintParser(toks, index, len(body.rstrip()) + 1)
            lhs, lc, op, rhs, rc = parser.constraint()
        except _LineError as exc:
            errors.append(ParseDiagnostic(lineno, exc.col, exc.message))
            continue
        width = 2 * len(names)
        rows = sections[current]
        if op.text == "<=":
            rows.append(_row(width, lhs, lc, rhs, rc, False) + (False,))
        elif op.text == ">=":
            rows.append(_row(width, lhs, lc, rhs, rc, True) + (False,))
        elif op.text == "=":
            rows.append(_row(width, lhs, lc, rhs, rc, False) + (False,))
            rows.append(_row(width, lhs, lc, rhs, rc, True) + (False,))
        else:
            rows.append(_row(width, lhs, lc, rhs, rc, op.text == ">") + (True,))
            warnings.append(
                ParseDiagnostic(
                    lineno,
                    op.col,
                    "strict inequality %r: relation is not closed; solvers need closure mode" % op.text,
                    "warning",
                )
            )

    if names is None:
        errors.append(ParseDiagnostic(1, 1, "missing 'vars:' header"))
    elif "loop" not in sections:
        errors.append(ParseDiagnostic(max(1, len(src.text.splitlines())), 1, "missing 'loop:' section"))
    elif not loop_lines:
        errors.append(ParseDiagnostic(loop_line, 1, "empty 'loop:' section"))
    if errors:
        raise ParseError(errors, src.origin)

    def relation(rows) -> LinearRelation:
        return LinearRelation(
            len(names), tuple(r[0] for r in rows), tuple(r[1] for r in rows), tuple(r[2] for r in rows)
        )

    stem = relation(sections["stem"]) if "stem" in sections else None
    program = LassoProgram(tuple(names), relation(sections["loop"]), stem)
    return ParseResult(program, warnings)


def parse_file(path: str) -> ParseResult:
    if path == "-":
        import sys

        return parse(SourceProgram(sys.stdin.read(), "<stdin>"))
    with open(path, encoding="utf-8") as fh:
        return parse(SourceProgram(fh.read(), path))


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def _fmt_linexpr(coeffs, names: List[str]) -> str:
    n = len(names)
    parts = []
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        name = names[j] if j < n else names[j - n] + "'"
        mag = abs(c)
        term = name if mag == 1 else "%s %s" % (_fmt_coeff(mag), name)
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"


def _fmt_bound(b: Fraction) -> str:
    return _fmt_coeff(b) if b >= 0 else "-" + _fmt_coeff(-b)


def _render_relation(rel: LinearRelation, names: List[str]) -> List[str]:
    lines = []
    i = 0
    while i < rel.rows:
        lhs = _fmt_linexpr(rel.A[i], names)
        nxt = i + 1
        if (
            nxt < rel.rows
            and not rel.strict[i]
            and not rel.strict[nxt]
            and rel.A[nxt] == tuple(-c for c in rel.A[i])
            and rel.b[nxt] == -rel.b[i]
        ):
            lines.append("  %s = %s" % (lhs, _fmt_bound(rel.b[i])))
            i += 2
            continue
        if rel.strict[i]:
            lines.append("  %s < %s  # strict" % (lhs, _fmt_bound(rel.b[i])))
        else:
            lines.append("  %s <= %s" % (lhs, _fmt_bound(rel.b[i])))
        i += 1
    return lines


def render(prog: LassoProgram) -> str:
    """Write ``prog`` in ``.lasso`` syntax; parsing the text reproduces the rows."""
    names = list(prog.var_names)
    out = ["vars: " + " ".join(names)]
    if prog.stem is not None:
        out.append("stem:")
        out.extend(_render_relation(prog.stem, names))
    out.append("loop:")
    out.extend(_render_relation(prog.loop, names))
    return "\n".join(out) + "\n"
