import re
from fractions import Fraction as F

import pytest

from conftest import FIXTURES, load
from gnta.certs import check_gnta
from gnta.model import GNTA
from gnta.parser import parse
from gnta.smtlib import (
    InvalidModel,
    ModelError,
    UnsupportedModelValue,
    export_qfnra,
    import_model,
    literal,
    model_value,
    sanitize_names,
    _read_sexps,
)
from gnta.synth import StrictRowsError


def exported(name):
    prog = load(name + ".lasso")
    if prog.has_strict:
        prog, _ = prog.closed()
    return prog, export_qfnra(prog).text


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_golden(name):
    _, text = exported(name)
    assert text.encode("ascii") == (FIXTURES / (name + ".smt2")).read_bytes()


def test_example2_ray_rows():
    _, text = exported("example2")
    assert "(assert (<= (- (* lambda y_a) (* 2 y_a)) 0))" in text
    assert "(assert (<= (- (* 2 y_a) (* lambda y_a)) 0))" in text


def test_strict_rejected():
    with pytest.raises(StrictRowsError):
        export_qfnra(load("example3.lasso"))


def test_identity_loop_assert_count():
    text = export_qfnra(parse("vars: x\nloop:\n x >= 0\n x' = x\n").program).text
    assert text.count("(assert ") == 7
    assert text.startswith("(set-logic QF_NRA)\n")
    assert text.endswith("(check-sat)\n(get-model)\n")
    assert "set-option" not in text and "push" not in text


def test_stem_asserts():
    loop_only = export_qfnra(parse("vars: x\nloop:\n x >= 0\n x' = x\n").program).text
    assert "x0_x" not in loop_only.split("(assert (> lambda 0))")[1]
    lasso = export_qfnra(parse("vars: x\nstem:\n x' = 3\nloop:\n x >= 0\n x' = x\n").program).text
    assert lasso.count("(assert ") == 9
    assert "(assert (<= x1_x 3))" in lasso


@pytest.mark.parametrize("name", ["example1", "example2", "example3", "halving"])
def test_nonlinearity_budget(name):
    prog, text = exported(name)
    products = set(re.findall(r"\(\* lambda [^()\s]+\)", text))
    assert products == {"(* lambda y_%s)" % v for v in prog.var_names}
    # no other product mentions two declared constants
    for m in re.findall(r"\(\* ([^()\s]+) ([^()\s]+)\)", text):
        assert m[0] == "lambda" or not re.fullmatch(r"[A-Za-z_]\w*", m[0])


def test_literals_and_names():
    assert [literal(F(v)) for v in ("3", "1/2", "-3", "-1/2", "0")] == ["3", "(/ 1 2)", "(- 3)", "(- (/ 1 2))", "0"]
    assert sanitize_names(["a", "a'", "a_", "x.y"]) == {"a": "a", "a'": "a_", "a_": "a__1", "x.y": "x_y"}


def test_deterministic():
    assert exported("example2")[1] == exported("example2")[1]


def test_import_recorded_example1():
    prog = load("example1.lasso")
    g = import_model((FIXTURES / "example1.z3.out").read_text(), prog)
    assert check_gnta(prog, g).valid and g.lam == 1 and g.y == (1, 1)
    # no stem: x0 follows x1 regardless of the model's x0 values
    assert g.x0 == g.x1


def test_import_recorded_example3_closure():
    prog, _ = load("example3.lasso").closed()
    g = import_model((FIXTURES / "example3.z3.out").read_text(), prog)
    assert g == GNTA((0,), (0,), (0,), 1)


def test_import_recorded_halving():
    prog = load("halving.lasso")
    g = import_model((FIXTURES / "halving.z3.out").read_text(), prog)
    assert g.lam == F(1, 2) and check_gnta(prog, g).valid


def test_import_unsat_example2():
    with pytest.raises(ModelError, match="sat"):
        import_model((FIXTURES / "example2.z3.out").read_text(), load("example2.lasso"))


def test_import_hand_written_model():
    text = "sat\n(model\n (define-fun lambda () Real 1)\n (define-fun y_a () Real 1)\n (define-fun y_b () Real 1)\n" \
        " (define-fun x1_a () Real 7)\n (define-fun x1_b () Real 8))\n"
    assert import_model(text, load("example1.lasso")) == GNTA((7, 8), (7, 8), (1, 1), 1)


def test_import_get_value_style():
    text = "sat\n((lambda (/ 1 2)) (x1_x 4) (y_x (- 2)))\n"
    assert import_model(text, load("halving.lasso")) == GNTA((4,), (4,), (-2,), F(1, 2))


def test_model_values():
    assert model_value(_read_sexps("(/ 1 2)")[0]) == F(1, 2)
    assert model_value(_read_sexps("(- (/ 3.5 2))")[0]) == F(-7, 4)
    assert model_value("0.125") == F(1, 8)
    with pytest.raises(UnsupportedModelValue) as err:
        model_value(_read_sexps("(root-obj (+ (^ x 2) (- 2)) 1)")[0])
    assert "root-obj" in err.value.term


def test_import_root_object():
    text = "sat\n(model (define-fun lambda () Real (root-obj (+ (^ x 2) (- 2)) 1)))\n"
    with pytest.raises(UnsupportedModelValue):
        import_model(text, load("halving.lasso"))


def test_import_rounded_model_rejected():
    # a decimal approximation that misses the exact relation
    text = "sat\n(model (define-fun lambda () Real 0.5) (define-fun x1_x () Real 4.0)" \
        " (define-fun y_x () Real (- 2.0001)))\n"
    with pytest.raises(InvalidModel):
        import_model(text, load("halving.lasso"))


def test_malformed_output():
    with pytest.raises(ModelError):
        import_model("sat\n((", load("halving.lasso"))
    with pytest.raises(ModelError):
        import_model("sat\n(model)\n", load("halving.lasso"))
