from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gnta.model import (
    GNTA,
    ContractError,
    LinearRelation,
    RecurrenceSet,
    closure,
    fmt_rational,
    parse_rational,
    relation_member,
)
from gnta.parser import parse

rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@given(rationals, rationals, st.sampled_from(["+", "-", "*", "/"]))
def test_arithmetic_stays_canonical(a, b, op):
    if op == "/" and b == 0:
        return
    r = {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else None}[op]
    assert r.denominator > 0
    from math import gcd

    assert gcd(abs(r.numerator), r.denominator) == 1


def test_member_example2(ex2):
    assert relation_member(ex2.loop, (1, 1), (2, 3))
    assert not relation_member(ex2.loop, (0, 1), (0, 3))


def test_member_example1(ex1):
    assert relation_member(ex1.loop, (7, 8), (8, 9))
    assert not relation_member(ex1.loop, (6, 8), (8, 9))


def test_member_dimension_mismatch(ex1):
    with pytest.raises(ContractError):
        relation_member(ex1.loop, (1,), (1, 2))


def test_floats_refused():
    with pytest.raises(TypeError):
        relation_member(LinearRelation(1, ((1, 0),), (0,)), (0.5,), (0,))


def test_closure_example3(ex3):
    c = closure(ex3.loop)
    assert c.changed
    assert c.relation.A == ex3.loop.A and c.relation.b == ex3.loop.b
    assert c.relation.strict == (False, False, False)
    assert relation_member(c.relation, (0,), (0,))
    assert not relation_member(ex3.loop, (0,), (0,))


def test_closure_identity_on_closed(ex1):
    c = closure(ex1.loop)
    assert not c.changed and c.relation == ex1.loop


def test_closure_clears_flags():
    rel = parse("vars: x\nloop:\n x < 5\n x >= 1\n").program.loop
    assert rel.strict == (True, False)
    c = closure(rel)
    assert c.changed and c.relation.strict == (False, False)
    assert c.relation.A == rel.A and c.relation.b == rel.b


small = st.integers(-4, 4).map(F)


@given(
    st.lists(st.tuples(st.tuples(small, small), small, st.booleans()), min_size=1, max_size=5),
    small,
    small,
)
def test_member_monotone_under_closure(rows, x, xp):
    rel = LinearRelation(1, tuple(r[0] for r in rows), tuple(r[1] for r in rows), tuple(r[2] for r in rows))
    if relation_member(rel, (x,), (xp,)):
        assert relation_member(closure(rel).relation, (x,), (xp,))


def test_relation_shape_checked():
    with pytest.raises(ContractError):
        LinearRelation(2, ((1, 2, 3),), (0,))
    with pytest.raises(ContractError):
        LinearRelation(1, ((1, 2),), (0, 1))


def test_gnta_json_roundtrip():
    g = GNTA((7, 8), (7, 8), (1, 1), 1)
    data = g.to_json()
    assert data == {"x0": ["7/1", "8/1"], "x1": ["7/1", "8/1"], "y": ["1/1", "1/1"], "lambda": "1/1"}
    assert GNTA.from_json(data) == g


@pytest.mark.parametrize("bad", [{"x0": []}, {"x0": ["1"], "x1": ["1"], "y": ["0.5"], "lambda": "1"}, []])
def test_gnta_json_malformed(bad):
    with pytest.raises(ContractError):
        GNTA.from_json(bad)


def test_rational_text():
    assert fmt_rational(F(10)) == "10/1"
    assert fmt_rational(F(-1, 2)) == "-1/2"
    assert parse_rational(" -3/6 ") == F(-1, 2)
    with pytest.raises(ContractError):
        parse_rational("1e3")


def test_recurrence_set_membership():
    s = RecurrenceSet(2, (((1, 1), 15),), (((1, -1), -1),))
    assert s.contains((7, 8)) and s.contains((9, 10))
    assert not s.contains((6, 7)) and not s.contains((8, 8))
    with pytest.raises(ContractError):
        s.contains((1,))
