"""Command line front end.

Exit codes: 0 proven / valid, 1 input error, 2 unknown, 3 invalid certificate.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from gnta.certs import (
    build_recurrence_set,
    check_gnta,
    unroll_gnta,
    verify_execution,
    verify_recurrence_set,
)
from gnta.lp import BranchInfeasible, DepthExceeded, Infeasible
from gnta.model import GNTA, ContractError, LassoProgram, RecurrenceSet, fmt_rational, parse_rational
from gnta.parser import ParseError, SourceProgram, parse
from gnta.smtlib import InvalidModel, ModelError, export_qfnra, import_model
from gnta.synth import (
    Found,
    NotFoundForCandidates,
    StrictRejected,
    SynthConfig,
    default_lambda_grid,
    parse_lambda_list,
    synthesize,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNKNOWN = 2
EXIT_INVALID = 3


@dataclass
class Nonterminating:
    gnta: GNTA
    witness: List[tuple]
    recurrence_set: Optional[RecurrenceSet] = None
    recurrence_check: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "status": "nonterminating",
            "gnta": self.gnta.to_json(),
            "witness": [[fmt_rational(v) for v in s] for s in self.witness],
        }
        if self.recurrence_set is not None:
            out["recurrenceSet"] = self.recurrence_set.to_json()
            out["recurrenceCheck"] = self.recurrence_check
        return out


@dataclass
class Unknown:
    reasons: List[dict]
    closure_candidate: Optional[GNTA] = None
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"status": "unknown", "reasons": self.reasons, "notes": self.notes}
        if self.closure_candidate is not None:
            out["closureCandidate"] = self.closure_candidate.to_json()
        return out


@dataclass
class Rejected:
    diagnostics: List[str]

    def to_json(self) -> dict:
        return {"status": "rejected", "diagnostics": self.diagnostics}


def outcome_from_json(data: dict, n: int):
    status = data["status"]
    if status == "nonterminating":
        rs = data.get("recurrenceSet")
        return Nonterminating(
            GNTA.from_json(data["gnta"]),
            [tuple(parse_rational(v) for v in s) for s in data["witness"]],
            RecurrenceSet.from_json(rs, n) if rs is not None else None,
            data.get("recurrenceCheck"),
        )
    if status == "unknown":
        cand = data.get("closureCandidate")
        return Unknown(data["reasons"], GNTA.from_json(cand) if cand else None, list(data.get("notes", [])))
    if status == "rejected":
        return Rejected(list(data["diagnostics"]))
    raise ValueError("unknown outcome status %r" % status)


@dataclass
class RunReport:
    program_digest: str
    mode: str
    closure_applied: bool
    outcome: Union[Nonterminating, Unknown, Rejected]
    num_vars: int = 0
    timing_ms: Dict[str, float] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "programDigest": self.program_digest,
            "mode": self.mode,
            "closureApplied": self.closure_applied,
            "numVars": self.num_vars,
            "outcome": self.outcome.to_json(),
            "timingMs": self.timing_ms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        n = data.get("numVars", 0)
        return cls(
            data["programDigest"],
            data["mode"],
            data["closureApplied"],
            outcome_from_json(data["outcome"], n),
            n,
            dict(data.get("timingMs", {})),
        )


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _read_source(path: str) -> SourceProgram:
    if path == "-":
        return SourceProgram(sys.stdin.read(), "<stdin>")
    with open(path, encoding="utf-8") as fh:
        return SourceProgram(fh.read(), path)


def _fmt_state(state) -> str:
    return " ".join(fmt_rational(v) for v in state)


def _fmt_vec(state) -> str:
    return "(" + ", ".join(fmt_rational(v) for v in state) + ")"


def _reason(attempt) -> dict:
    out = {"lambda": fmt_rational(attempt.lam)}
    res = attempt.outcome
    if isinstance(res, Infeasible):
        out["verdict"] = "infeasible"
        out["certificate"] = [fmt_rational(c) for c in res.certificate]
        out["support"] = [attempt.problem.label(i) for i, c in enumerate(res.certificate) if c]
    elif isinstance(res, BranchInfeasible):
        out["verdict"] = "integer-infeasible"
        out["leaves"] = len(res.leaves)
    elif isinstance(res, DepthExceeded):
        out["verdict"] = "depth-exceeded"
        out["depthLimit"] = res.depth_limit
    return out


class _Timer:
    def __init__(self):
        self.ms: Dict[str, float] = {}

    def __call__(self, phase: str):
        timer = self

        class _Phase:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                timer.ms[phase] = round((time.perf_counter() - self.t) * 1000, 3)

        return _Phase()


def run_prove(src: SourceProgram, args) -> Tuple[int, RunReport, List[str]]:
    """Core of ``prove``: returns exit code, report, and human-readable lines."""
    timer = _Timer()
    mode = "integer" if args.integer else "real"
    digest = _digest(src.text)
    lines: List[str] = []
    with timer("parse"):
        try:
            parsed = parse(src)
        except ParseError as exc:
            diags = [d.format(src.origin) for d in exc.diagnostics]
            return EXIT_INPUT, RunReport(digest, mode, False, Rejected(diags), 0, timer.ms), diags
    prog = parsed.program
    lines += [d.format(src.origin) for d in parsed.warnings]

    try:
        grid = parse_lambda_list(args.lambdas) if args.lambdas else tuple(default_lambda_grid())
        cfg = SynthConfig(
            lambda_grid=grid,
            use_eigen_candidates=not args.no_eigen,
            integer_mode=args.integer,
            closure_mode=args.closure,
        )
    except (ValueError, ZeroDivisionError) as exc:
        diags = ["bad --lambda value: %s" % exc]
        return EXIT_INPUT, RunReport(digest, mode, False, Rejected(diags), prog.n, timer.ms), diags
    with timer("synthesize"):
        report = synthesize(prog, cfg)
    out = report.outcome
    if isinstance(out, StrictRejected):
        diags = [
            "%s row %d is strict; rerun with --closure to analyse the topological closure" % (sec, i)
            for sec, i in out.rows
        ]
        return EXIT_INPUT, RunReport(digest, mode, False, Rejected(diags), prog.n, timer.ms), lines + diags

    closed = report.program
    if isinstance(out, NotFoundForCandidates):
        reasons = [_reason(a) for a in out.attempts]
        notes = ["no geometric nontermination argument for the tried lambda candidates"]
        lines.append("result: unknown (%s)" % notes[0])
        for r in reasons:
            lines.append("  lambda %s: %s" % (r["lambda"], r["verdict"]))
        rr = RunReport(digest, mode, report.closure_applied, Unknown(reasons, None, notes), prog.n, timer.ms)
        _write_smt(args, closed, lines)
        return EXIT_UNKNOWN, rr, lines

    assert isinstance(out, Found)
    gnta = out.gnta
    with timer("witness"):
        witness = unroll_gnta(gnta, args.witness_steps)
        strict_loop = prog.loop if report.closure_applied else None
        exec_check = verify_execution(closed, witness, strict_original=strict_loop)
        original_check = check_gnta(prog, gnta)
    if report.closure_applied and not (exec_check.valid and original_check.valid):
        bad = exec_check.first() or original_check.first()
        notes = [
            "closure GNTA found but it is not a proof for the original strict program",
            "strict re-check failed: %s" % bad,
        ]
        lines.append("result: unknown (closure GNTA %s rejected by strict re-check)" % _fmt_vec(gnta.x1))
        lines.append("  " + notes[1])
        rr = RunReport(digest, mode, True, Unknown([], gnta, notes), prog.n, timer.ms)
        _write_smt(args, closed, lines)
        return EXIT_UNKNOWN, rr, lines

    rs = rs_check = None
    if args.recset:
        with timer("recurrence"):
            rs = build_recurrence_set(gnta)
            chk = verify_recurrence_set(prog, rs, args.samples, gnta)
            rs_check = {
                "passed": chk.valid,
                "samples": chk.samples,
                "failures": [f.to_json() for f in chk.failures],
                "note": chk.note,
            }
    lines.append("result: nonterminating (lambda = %s)" % fmt_rational(gnta.lam))
    lines.append("  x0 = %s" % _fmt_vec(gnta.x0))
    lines.append("  x1 = %s" % _fmt_vec(gnta.x1))
    lines.append("  y  = %s" % _fmt_vec(gnta.y))
    if report.fixed_point_used:
        lines.append("  (fixed point)")
    lines.append("witness prefix:")
    lines += ["  %d: %s" % (t, _fmt_state(s)) for t, s in enumerate(witness.states)]
    if rs_check is not None:
        lines.append(
            "recurrence set: %s (%d samples)" % ("passed" if rs_check["passed"] else "FAILED", rs_check["samples"])
        )
    outcome = Nonterminating(gnta, list(witness.states), rs, rs_check)
    _write_smt(args, closed, lines)
    return EXIT_OK, RunReport(digest, mode, report.closure_applied, outcome, prog.n, timer.ms), lines


def _write_smt(args, prog: LassoProgram, lines: List[str]) -> None:
    if getattr(args, "smt_out", None):
        with open(args.smt_out, "w", encoding="ascii") as fh:
            fh.write(export_qfnra(prog).text)
        lines.append("wrote QF_NRA script to %s" % args.smt_out)


def cmd_prove(args) -> int:
    try:
        src = _read_source(args.program)
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    code, report, lines = run_prove(src, args)
    if args.json:
        print(report.dumps())
    else:
        stream = sys.stderr if code == EXIT_INPUT else sys.stdout
        for line in lines:
            print(line, file=stream)
    return code


def _load_program_and_cert(args):
    src = _read_source(args.program)
    prog = parse(src).program
    with open(args.cert, encoding="utf-8") as fh:
        data = json.load(fh)
    gnta = GNTA.from_json(data)
    if gnta.n != prog.n:
        raise ContractError("certificate has %d coordinates, program has %d variables" % (gnta.n, prog.n))
    return prog, gnta


def _guarded(fn):
    def wrapper(args) -> int:
        try:
            return fn(args)
        except ParseError as exc:
            print(str(exc), file=sys.stderr)
        except (OSError, json.JSONDecodeError, ContractError, ModelError) as exc:
            if isinstance(exc, InvalidModel):
                print("invalid: %s" % exc, file=sys.stderr)
                return EXIT_INVALID
            print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT

    return wrapper


@_guarded
def cmd_check(args) -> int:
    prog, gnta = _load_program_and_cert(args)
    report = check_gnta(prog, gnta)
    if report.valid:
        print("valid geometric nontermination argument (lambda = %s)" % fmt_rational(gnta.lam))
        return EXIT_OK
    for f in report.failures:
        print("invalid: %s" % f)
    return EXIT_INVALID


@_guarded
def cmd_simulate(args) -> int:
    prog, gnta = _load_program_and_cert(args)
    if args.steps < 1:
        raise ContractError("--steps must be at least 1")
    witness = unroll_gnta(gnta, args.steps)
    for s in witness.states:
        print(_fmt_state(s))
    report = verify_execution(prog, witness)
    if report.valid:
        return EXIT_OK
    bad = report.first()
    print("invalid execution at step %d: %s" % (bad.step, bad), file=sys.stderr)
    return EXIT_INVALID


@_guarded
def cmd_smt(args) -> int:
    prog = parse(_read_source(args.program)).program
    if args.closure:
        prog, _ = prog.closed()
    text = export_qfnra(prog).text
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


@_guarded
def cmd_import_model(args) -> int:
    prog = parse(_read_source(args.program)).program
    with open(args.model, encoding="utf-8") as fh:
        text = fh.read()
    gnta = import_model(text, prog)
    print(json.dumps(gnta.to_json()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gnta", description="Geometric nontermination prover for linear lasso programs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="search for a geometric nontermination argument")
    p.add_argument("program", help=".lasso file or - for stdin")
    p.add_argument("--lambda", dest="lambdas", metavar="V1,V2,...", help="override the lambda grid")
    p.add_argument("--no-eigen", action="store_true", help="skip eigenvalue lambda candidates")
    p.add_argument("--integer", action="store_true", help="require an integral certificate")
    p.add_argument("--closure", action="store_true", help="analyse the closure of strict relations")
    p.add_argument("--witness-steps", type=int, default=10, metavar="N")
    p.add_argument("--json", action="store_true", help="print the JSON run report")
    p.add_argument("--smt-out", metavar="PATH", help="also write the QF_NRA script")
    p.add_argument("--recset", dest="recset", action="store_true", default=True)
    p.add_argument("--no-recset", dest="recset", action="store_false")
    p.add_argument("--samples", type=int, default=8, metavar="K")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="check a GNTA certificate (JSON)")
    p.add_argument("program")
    p.add_argument("cert")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="print and verify the execution a certificate induces")
    p.add_argument("program")
    p.add_argument("cert")
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("smt", help="export the QF_NRA constraints with symbolic lambda")
    p.add_argument("program")
    p.add_argument("-o", "--output")
    p.add_argument("--closure", action="store_true")
    p.set_defaults(func=cmd_smt)

    p = sub.add_parser("import-model", help="turn solver output for an exported script into a GNTA")
    p.add_argument("program")
    p.add_argument("model")
    p.set_defaults(func=cmd_import_model)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "witness_steps", 1) < 1:
        print("error: --witness-steps must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
