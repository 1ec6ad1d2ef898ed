"""Command-line driver.

    vsalgebroid COMMAND --input FILE [--max-degree N] [--mode-window MIN:MAX]
                [--seed S] [--report text|json]

Exit status: 0 when every requested check passes, 2 when a check fails,
1 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any

from .algebroid import (
    PrerequisiteFailed, check_algebroid_axioms, correspondence_report, from_truncated_conformal,
    to_truncated_conformal,
)
from .document import DocumentError, InputDocument, load_document
from .exact import format_rational
from .kahler import InvariantViolation, UnsolvableCorrection, build_section4_algebroid, build_section4_L1
from .loop import LoopQuotient, check_loop_jacobi
from .report import CheckFailed, CheckReport
from .tconf import InputError, check_tconf
from .verma import ClosureNotStabilized, check_lemma_e, build_vb
from .virplus import (
    PreconditionFailed, check_dhat_equivariance, check_Lm_mode_bracket, check_LmE_stability,
    check_semiconformal_conditions, check_vir_derivations, check_vir_relations_on_loop, invariant_form_dimension,
)

SCHEMA_VERSION = 1
COMMANDS = ("check-tconf", "check-algebroid", "build-vb", "check-semiconformal", "check-virasoro",
            "example-tg", "invariant-form-dim")

EXIT_PASS, EXIT_INPUT, EXIT_FAIL = 0, 1, 2


class JobError(ValueError):
    """The job cannot run on this input (exit 1)."""


@dataclass
class JobSpec:
    command: str
    input: str
    max_degree: int = 4
    mode_window: tuple[int, int] = (-4, 4)
    seed: int = 0
    report: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise JobError(f"unknown command {self.command!r}")
        if self.max_degree < 1:
            raise JobError("--max-degree must be at least 1")
        lo, hi = self.mode_window
        if not (lo <= -1 and hi >= 1):
            raise JobError(f"--mode-window {lo}:{hi} must contain [-1, 1]")


@dataclass
class JobResult:
    spec: JobSpec
    exit_code: int = EXIT_PASS
    checks: list[CheckReport] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    error: dict | None = None
    name: str = ""
    kind: str = ""

    @property
    def status(self) -> str:
        return {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_INPUT: "error"}[self.exit_code]

    def to_dict(self) -> dict:
        s = self.spec
        d: dict[str, Any] = {
            "schemaVersion": SCHEMA_VERSION,
            "command": s.command,
            "input": {"path": s.input, "name": self.name, "kind": self.kind},
            "options": {"maxDegree": s.max_degree, "modeWindow": list(s.mode_window), "seed": s.seed},
            "status": self.status,
            "exitCode": self.exit_code,
            "checks": [c.to_dict() for c in self.checks],
            "tables": self.tables,
            "timing": {k: round(v, 4) for k, v in self.timing.items()},
        }
        if self.error is not None:
            d["error"] = self.error
        return d

    def render(self) -> str:
        lines = [f"{self.spec.command} on {self.name or self.spec.input}"]
        for c in self.checks:
            lines.append(c.render())
        for k, v in self.tables.items():
            lines.append(f"{k}: {json.dumps(v)}")
        if self.timing:
            lines.append("timing: " + ", ".join(f"{k} {v:.3f}s" for k, v in self.timing.items()))
        if self.error is not None:
            lines.append(f"error ({self.error['type']}): {self.error['message']}")
        lines.append(f"status: {self.status.upper()} (exit {self.exit_code})")
        return "\n".join(lines)


class _Context:
    """The objects a command may need, built lazily from the document."""

    def __init__(self, doc: InputDocument, res: JobResult):
        self.doc, self.res = doc, res
        self._inp = self._V = self._data = self._C = self._star = None

    def timed(self, key: str, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            self.res.timing[key] = self.res.timing.get(key, 0.0) + time.perf_counter() - t0

    @property
    def section4(self):
        if self._inp is None:
            if self.doc.kind != "section4":
                raise JobError(f"this command needs a section4 binding, input has {self.doc.kind!r}")
            self._inp = self.doc.section4_input()
        return self._inp

    def algebroid(self):
        if self._V is None:
            kind = self.doc.kind
            if kind == "section4":
                inp = self.section4
                self._V = self.timed("build algebroid", lambda: build_section4_algebroid(inp))
                self._data = build_section4_L1(inp, self._V)
                self.res.tables["kahler"] = {
                    "dim": self._V.kahler.dim, "basis": list(self._V.labels[self._V.dT:]),
                }
            elif kind == "algebroid":
                self._V, self._data = self.doc.algebroid()
            else:
                C, star = self.tconf()
                if star is None:
                    raise JobError("a tconf binding needs a 'star' table to define an algebroid")
                self._V = from_truncated_conformal(C, star, check=False)
        return self._V

    def b_module(self):
        self.algebroid()
        if self._data is None:
            raise JobError("no L(1) data: supply 'L1' in the algebroid binding or use a section4 binding")
        return self._data

    def tconf(self):
        if self._C is None:
            if self.doc.kind == "tconf":
                self._C, self._star = self.doc.tconf()
            else:
                V = self.algebroid()
                self._C, self._star = to_truncated_conformal(V, check=False), V.star
        return self._C, self._star


def _add(res: JobResult, ctx: _Context, key: str, fn) -> CheckReport:
    rep = ctx.timed(key, fn)
    res.checks.append(rep)
    return rep


def _cmd_check_tconf(ctx: _Context, res: JobResult, spec: JobSpec):
    C, star = ctx.tconf()
    _add(res, ctx, "tconf axioms", lambda: check_tconf(C))
    if star is not None:
        _add(res, ctx, "correspondence", lambda: correspondence_report(C, star))


def _cmd_check_algebroid(ctx: _Context, res: JobResult, spec: JobSpec):
    if ctx.doc.kind == "section4":
        _add(res, ctx, "input", lambda: ctx.section4.structure_report())
    V = ctx.algebroid()
    rep = _add(res, ctx, "algebroid axioms", lambda: check_algebroid_axioms(V, raise_on_prerequisite=False))
    if rep.passed:
        C, star = ctx.tconf()
        _add(res, ctx, "correspondence", lambda: correspondence_report(C, star))
        _add(res, ctx, "tconf axioms", lambda: check_tconf(C))


def _dims_tables(res: JobResult, G):
    res.tables["graded dimensions"] = G.dims()
    res.tables["truncation"] = G.table()
    res.tables["cap"] = G.cap
    res.tables["cap check"] = G.cap_check
    res.timing.update({f"V_B degree {k}": v for k, v in G.timing.items() if isinstance(k, int)})


def _build(ctx: _Context, res: JobResult, spec: JobSpec):
    V = ctx.algebroid()
    return ctx.timed("build V_B", lambda: build_vb(V, spec.max_degree))


def _cmd_build_vb(ctx: _Context, res: JobResult, spec: JobSpec):
    V = ctx.algebroid()
    pre = check_algebroid_axioms(V, raise_on_prerequisite=False)
    if not pre.passed:
        res.checks.append(pre)
        return
    G = _build(ctx, res, spec)
    _dims_tables(res, G)
    _add(res, ctx, "generator stability", lambda: check_lemma_e(G.M))


def _cmd_check_semiconformal(ctx: _Context, res: JobResult, spec: JobSpec):
    V, data = ctx.algebroid(), ctx.b_module()
    rep = _add(res, ctx, "semi-conformal", lambda: check_semiconformal_conditions(V, data))
    res.tables["invariant form dimension"] = invariant_form_dimension(V, data)
    if rep.passed:
        from .verma import VermaModule

        M = VermaModule(V, 2)
        _add(res, ctx, "L(m)E stability", lambda: check_LmE_stability(M, data))


def _cmd_check_virasoro(ctx: _Context, res: JobResult, spec: JobSpec):
    V, data = ctx.algebroid(), ctx.b_module()
    C, _ = ctx.tconf()
    _add(res, ctx, "loop relations", lambda: check_vir_relations_on_loop(C, data))
    try:
        _add(res, ctx, "dhat equivariance", lambda: check_dhat_equivariance(C, data, window=spec.mode_window))
    except PreconditionFailed as ex:
        res.checks.append(ex.report)
        return
    _add(res, ctx, "derivations", lambda: check_vir_derivations(LoopQuotient(C, spec.mode_window), data))
    pre = check_algebroid_axioms(V, raise_on_prerequisite=False)
    if not pre.passed:
        res.checks.append(pre)
        return
    G = _build(ctx, res, spec)
    _dims_tables(res, G)
    _add(res, ctx, "L(m) on V_B", lambda: check_Lm_mode_bracket(G, data))


def _cmd_example_tg(ctx: _Context, res: JobResult, spec: JobSpec):
    inp = ctx.section4
    _add(res, ctx, "input", lambda: inp.structure_report())
    _add(res, ctx, "cocycle", lambda: inp.cocycle_report())
    V = ctx.algebroid()
    data = ctx.b_module()
    res.tables["dimensions"] = {"A": V.dA, "g": inp.g.dim, "Gamma": V.dB, "Omega": V.kahler.dim}
    res.tables["L(1)"] = {V.labels[b]: {V.A.labels[a]: format_rational(c) for a, c in sorted(img.items())}
                          for b, img in sorted(data.L1.items())}
    res.tables["correction"] = V.correction_info
    rep = _add(res, ctx, "algebroid axioms", lambda: check_algebroid_axioms(V, raise_on_prerequisite=False))
    if not rep.passed:
        return
    C, star = ctx.tconf()
    _add(res, ctx, "correspondence", lambda: correspondence_report(C, star))
    _add(res, ctx, "tconf axioms", lambda: check_tconf(C))
    _add(res, ctx, "loop Jacobi", lambda: check_loop_jacobi(LoopQuotient(C, spec.mode_window), seed=spec.seed))
    G = _build(ctx, res, spec)
    _dims_tables(res, G)
    _add(res, ctx, "semi-conformal", lambda: check_semiconformal_conditions(V, data))
    res.tables["invariant form dimension"] = invariant_form_dimension(V, data)


def _cmd_invariant_form_dim(ctx: _Context, res: JobResult, spec: JobSpec):
    V, data = ctx.algebroid(), ctx.b_module()
    _add(res, ctx, "semi-conformal", lambda: check_semiconformal_conditions(V, data))
    res.tables["invariant form dimension"] = invariant_form_dimension(V, data)


_DISPATCH = {
    "check-tconf": _cmd_check_tconf,
    "check-algebroid": _cmd_check_algebroid,
    "build-vb": _cmd_build_vb,
    "check-semiconformal": _cmd_check_semiconformal,
    "check-virasoro": _cmd_check_virasoro,
    "example-tg": _cmd_example_tg,
    "invariant-form-dim": _cmd_invariant_form_dim,
}

_INPUT_ERRORS = (DocumentError, InvariantViolation, InputError, JobError, IndexError)


def run_job(spec: JobSpec) -> JobResult:
    res = JobResult(spec)
    try:
        doc = load_document(spec.input)
        res.name, res.kind = doc.name, doc.kind
        _DISPATCH[spec.command](_Context(doc, res), res, spec)
    except _INPUT_ERRORS as ex:
        res.exit_code = EXIT_INPUT
        res.error = {"type": type(ex).__name__, "message": str(ex)}
        if isinstance(ex, DocumentError):
            res.error["pointer"] = ex.pointer
        if isinstance(ex, CheckFailed) and ex.report is not None:
            res.checks.append(ex.report)
        return res
    except (ClosureNotStabilized, UnsolvableCorrection, PrerequisiteFailed) as ex:
        res.exit_code = EXIT_FAIL
        res.error = {"type": type(ex).__name__, "message": str(ex)}
        if ex.report is not None:
            res.checks.append(ex.report)
        return res
    res.exit_code = EXIT_PASS if all(c.passed for c in res.checks) else EXIT_FAIL
    return res


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vsalgebroid", description="Exact checks for vertex superalgebroids, "
                                "truncated conformal algebras and their vertex superalgebras V_B.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="JSON input document")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--mode-window", type=_window, default=(-4, 4), metavar="MIN:MAX")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", choices=("text", "json"), default="text")
    return p


def _join_window(argv: list[str]) -> list[str]:
    # "--mode-window -4:4" would otherwise parse -4:4 as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--mode-window" and i + 1 < len(argv):
            out.append(f"--mode-window={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(_join_window(list(sys.argv[1:] if argv is None else argv)))
    try:
        spec = JobSpec(args.command, args.input, args.max_degree, args.mode_window, args.seed, args.report)
    except JobError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    res = run_job(spec)
    if spec.report == "json":
        print(json.dumps(res.to_dict(), indent=2))
    else:
        print(res.render())
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
