"""End-to-end acceptance criteria; each test records one PASS/FAIL line."""

import json
import random
import time
from argparse import Namespace
from fractions import Fraction as F

import pytest

from conftest import FIXTURES, load, record_criterion
from corpus import corpus
from gnta.certs import (
    build_recurrence_set,
    check_gnta,
    unroll_gnta,
    verify_execution,
    verify_recurrence_set,
)
from gnta.cli import main, run_prove
from gnta.lp import (
    BranchInfeasible,
    Feasible,
    Infeasible,
    LPProblem,
    branch_certificate_valid,
    farkas_valid,
    fourier_motzkin_feasible,
    solve_feasibility,
    solve_integer_feasibility,
)
from gnta.model import GNTA
from gnta.parser import SourceProgram
from gnta.smtlib import export_qfnra, import_model
from gnta.synth import (
    Found,
    SynthConfig,
    default_lambda_grid,
    encode_fixed_lambda,
    find_fixed_point,
    synthesize,
)

pytestmark = pytest.mark.acceptance


def prove_args(**kw):
    base = dict(lambdas=None, no_eigen=False, integer=False, closure=False, witness_steps=10,
                json=True, smt_out=None, recset=True, samples=8)
    base.update(kw)
    return Namespace(**base)


def prove(name, **kw):
    path = FIXTURES / name
    return run_prove(SourceProgram(path.read_text(), str(path)), prove_args(**kw))


@pytest.fixture(scope="module")
def corpus_results():
    """Synthesis result for every corpus program, computed once."""
    progs = corpus()
    return [(p, synthesize(p)) for p in progs]


@pytest.fixture(scope="module")
def no_shortcut_results():
    """A slice of the corpus with the fixed-point shortcut disabled, to exercise y != 0."""
    progs = corpus()[::3]
    cfg = SynthConfig(fixed_point_shortcut=False)
    return [(p, synthesize(p, cfg)) for p in progs]


def test_criterion_1_example1(capsys):
    t0 = time.perf_counter()
    code, report, _ = prove("example1.lasso")
    out = report.outcome
    found_ok = code == 0 and out.gnta.lam == 1
    cert = str(FIXTURES / "example1.cert.json")
    check_code = main(["check", str(FIXTURES / "example1.lasso"), cert])
    capsys.readouterr()
    sim_code = main(["simulate", str(FIXTURES / "example1.lasso"), cert, "--steps", "4"])
    states = capsys.readouterr().out.splitlines()
    elapsed = time.perf_counter() - t0
    expected = ["7/1 8/1", "7/1 8/1", "8/1 9/1", "9/1 10/1", "10/1 11/1"]
    prefix_ok = [tuple(s) for s in out.witness[:5]] == [(7, 8), (7, 8), (8, 9), (9, 10), (10, 11)]
    ok = found_ok and check_code == 0 and sim_code == 0 and states == expected and prefix_ok and elapsed < 1
    assert record_criterion(1, ok, "prove lambda=%s, simulate states %s, %.3fs" % (out.gnta.lam, states, elapsed))


def test_criterion_2_example2():
    t0 = time.perf_counter()
    prog = load("example2.lasso")
    code, report, _ = prove("example2.lasso")
    rep = synthesize(prog)
    elapsed = time.perf_counter() - t0
    attempts = rep.outcome.attempts
    lams = [a.lam for a in attempts]
    certs_ok = all(isinstance(a.outcome, Infeasible) and farkas_valid(a.problem, a.outcome.certificate)
                   for a in attempts)
    # the certificate stored per lambda is checked against a fresh encoding as well
    fresh_ok = all(farkas_valid(encode_fixed_lambda(prog, a.lam), a.outcome.certificate) for a in attempts)
    ok = (code == 2 and report.outcome.to_json()["status"] == "unknown" and lams[:2] == [2, 3]
          and set(lams) >= {F(2), F(3)} | set(default_lambda_grid()) and certs_ok and fresh_ok and elapsed < 1)
    assert record_criterion(2, ok, "unknown, %d lambdas all Farkas-certified, %.3fs" % (len(lams), elapsed))


def test_criterion_3_example3():
    t0 = time.perf_counter()
    code_closed, report, lines = prove("example3.lasso", closure=True)
    code_plain, rejected, diags = prove("example3.lasso")
    elapsed = time.perf_counter() - t0
    cand = report.outcome.closure_candidate
    ok = (code_closed == 2 and cand is not None and cand.x1 == (0,) and report.closure_applied
          and any("strict re-check failed" in n for n in report.outcome.notes)
          and code_plain == 1 and any("--closure" in d for d in diags) and elapsed < 1)
    assert record_criterion(3, ok, "closure fixed point %s rejected; plain run exit %d, %.3fs"
                            % (cand.x1[0] if cand else None, code_plain, elapsed))


def test_criterion_4_witness_soundness(corpus_results, no_shortcut_results):
    found = [(p, r.outcome.gnta) for p, r in corpus_results + no_shortcut_results if r.found]
    failures = sum(not verify_execution(p, unroll_gnta(g, 1000)).valid for p, g in found)
    nonzero = sum(any(g.y) for _, g in found)
    ok = len(corpus_results) >= 500 and failures == 0 and len(found) > 0
    assert record_criterion(4, ok, "%d programs, %d found GNTAs (%d with y != 0), %d execution failures"
                            % (len(corpus_results), len(found), nonzero, failures))


def test_criterion_5_fixed_point_implies_found(corpus_results):
    loops = [(p, r) for p, r in corpus_results if p.stem is None]
    with_fp = [(p, r) for p, r in loops if find_fixed_point(p.loop) is not None]
    misses = sum(not r.found for _, r in with_fp)
    ok = len(loops) >= 500 and misses == 0
    assert record_criterion(5, ok, "%d loop programs, %d with fixed points, %d misses"
                            % (len(loops), len(with_fp), misses))


def test_criterion_6_lp_oracle():
    rng = random.Random(77)
    total = infeasible = mismatches = bad_certs = 0
    for _ in range(1200):
        k, m = rng.randint(1, 5), rng.randint(1, 12)
        rows = tuple((tuple(F(rng.randint(-3, 3)) for _ in range(k)), F(rng.randint(-4, 4))) for _ in range(m))
        p = LPProblem(k, rows)
        res = solve_feasibility(p)
        total += 1
        if isinstance(res, Feasible) != fourier_motzkin_feasible(p):
            mismatches += 1
        if isinstance(res, Infeasible):
            infeasible += 1
            bad_certs += not farkas_valid(p, res.certificate)
        elif not p.satisfied_by(res.point):
            mismatches += 1
    ok = total >= 1000 and mismatches == 0 and bad_certs == 0
    assert record_criterion(6, ok, "%d problems (%d infeasible), %d mismatches, %d bad certificates"
                            % (total, infeasible, mismatches, bad_certs))


def test_criterion_7_recurrence_sets(corpus_results, no_shortcut_results):
    found = [(p, r.outcome.gnta) for p, r in corpus_results + no_shortcut_results if r.found]
    failures = sum(not verify_recurrence_set(p, build_recurrence_set(g), gnta=g).valid for p, g in found)
    halving = load("halving.lasso")
    g = GNTA((4,), (4,), (-2,), F(1, 2))
    s = build_recurrence_set(g)
    interval_ok = (s.contains((0,)) and s.contains((4,)) and s.contains((F(1, 2),))
                   and not s.contains((F(-1, 1000),)) and not s.contains((F(4001, 1000),))
                   and verify_recurrence_set(halving, s, gnta=g).valid)
    verbatim = build_recurrence_set(g, verbatim_bound=True)
    singleton_ok = (verbatim.contains((4,)) and not verbatim.contains((2,))
                    and not verify_recurrence_set(halving, verbatim, gnta=g).valid)
    ok = failures == 0 and interval_ok and singleton_ok
    assert record_criterion(7, ok, "%d corpus sets, %d failures; halving [0,4] %s; verbatim singleton rejected %s"
                            % (len(found), failures, interval_ok, singleton_ok))


def test_criterion_8_smt():
    golden_ok = True
    for name in ("example1", "example2", "example3"):
        prog = load(name + ".lasso")
        if prog.has_strict:
            prog, _ = prog.closed()
        golden_ok &= export_qfnra(prog).text.encode("ascii") == (FIXTURES / (name + ".smt2")).read_bytes()
    imported = 0
    for name, closed in (("example1", False), ("example3", True), ("halving", False)):
        prog = load(name + ".lasso")
        if closed:
            prog, _ = prog.closed()
        g = import_model((FIXTURES / (name + ".z3.out")).read_text(), prog)
        imported += check_gnta(prog, g).valid
    ok = golden_ok and imported == 3
    assert record_criterion(8, ok, "goldens identical %s; %d/3 recorded models import to valid GNTAs"
                            % (golden_ok, imported))


def test_criterion_9_integer():
    t0 = time.perf_counter()
    rep = synthesize(load("example1.lasso"), SynthConfig(integer_mode=True))
    g = rep.outcome.gnta if isinstance(rep.outcome, Found) else None
    integral = g is not None and all(v.denominator == 1 for v in g.x0 + g.x1 + g.y + (g.lam,))
    two_x = LPProblem(1, (((F(2),), F(1)), ((F(-2),), F(-1))))
    res = solve_integer_feasibility(two_x)
    fractional_ok = (isinstance(solve_feasibility(two_x), Feasible) and isinstance(res, BranchInfeasible)
                     and branch_certificate_valid(two_x, res))
    code, report, _ = prove("example1.lasso", integer=True)
    elapsed = time.perf_counter() - t0
    ok = integral and fractional_ok and code == 0 and report.mode == "integer" and elapsed < 1
    assert record_criterion(9, ok, "integral GNTA %s; 2x = 1 integer-infeasible %s, %.3fs"
                            % (json.dumps(g.to_json()) if g else None, fractional_ok, elapsed))
