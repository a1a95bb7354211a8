"""End-to-end runs: parse, validate, analyze IQ, map, verify."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .datalog import format_facts
from .engine import BoundExceeded, WfaNet, check_soundness
from .iq import InconsistentTimestamps, IqVerdict, analyze_all, evaluate_model
from .mapper import InputMismatch, MappingError, MappingTrace, derive_trace, map_to_net
from .model import GoalModel, validate_model
from .parser import parse_goal_model, parse_wfa_net_with_warnings
from .properties import Violation, check_all, control_soundness

EXIT_OK, EXIT_FINDINGS, EXIT_ERROR = 0, 1, 2


@dataclass
class Stage:
    name: str
    status: str  # ok, failed, skipped
    detail: str = ""


@dataclass
class RunReport:
    command: str
    tool_version: str = __version__
    inputs: list[tuple[str, str]] = field(default_factory=list)
    stages: list[Stage] = field(default_factory=list)
    diagnostics: list[dict] = field(default_factory=list)
    verdicts: list[IqVerdict] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)
    soundness: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        if any(d["severity"] == "internal" for d in self.diagnostics):
            return EXIT_ERROR
        if any(d["severity"] == "error" for d in self.diagnostics):
            return EXIT_FINDINGS
        return EXIT_FINDINGS if any(v.is_error for v in self.violations) else EXIT_OK

    def stage(self, name: str, status: str, detail: str = "") -> None:
        self.stages.append(Stage(name, status, detail))

    def diagnose(self, severity: str, text: str) -> None:
        self.diagnostics.append({"severity": severity, "text": text})

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "inputs": [{"path": p, "sha256": d} for p, d in self.inputs],
            "stages": [s.__dict__ for s in self.stages],
            "diagnostics": self.diagnostics,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "violations": [v.to_dict() for v in self.violations],
            "soundness": self.soundness,
            "exit_code": self.exit_code,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(
            command=d["command"],
            tool_version=d["tool_version"],
            inputs=[(i["path"], i["sha256"]) for i in d["inputs"]],
            stages=[Stage(**s) for s in d["stages"]],
            diagnostics=list(d["diagnostics"]),
            verdicts=[IqVerdict.from_dict(v) for v in d["verdicts"]],
            violations=[Violation.from_dict(v) for v in d["violations"]],
            soundness=dict(d["soundness"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self, color: bool = False) -> str:
        red = (lambda s: f"\033[31m{s}\033[0m") if color else (lambda s: s)
        lines = [f"wfav {self.tool_version} {self.command}"]
        for s in self.stages:
            lines.append(f"stage {s.name}: {s.status}" + (f" ({s.detail})" if s.detail else ""))
        for key, label in (("control_flow", "control flow"), ("wfa", "with information flow and IQ")):
            if key in self.soundness:
                lines.append(f"soundness ({label}): {_soundness_line(self.soundness[key])}")
        for d in self.diagnostics:
            lines.append(red(d["text"]) if d["severity"] != "warning" else d["text"])
        failed = [v for v in self.verdicts if not v.satisfied]
        lines.append(f"verdicts: {len(self.verdicts)} ({len(failed)} unsatisfied)")
        lines.extend("  " + red(str(v)) for v in failed)
        errors = [v for v in self.violations if v.is_error]
        lines.append(f"violations: {len(errors)}")
        lines.extend("  " + (red(str(v)) if v.is_error else str(v)) for v in self.violations)
        lines.append(f"exit: {self.exit_code}")
        return "\n".join(lines) + "\n"


def _soundness_line(d: dict) -> str:
    if "bound_exceeded" in d:
        return f"bound exceeded in {d['bound_exceeded']['place']}"
    verdict = "sound" if d["sound"] else "unsound"
    return f"{verdict}, {d['nodes']} configurations, {d['edges']} firings"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _soundness_dict(result) -> dict:
    if isinstance(result, BoundExceeded):
        return {"bound_exceeded": {"bound": result.bound, "place": result.place, "witness": list(result.witness)}}
    return result.to_dict()


@dataclass
class Outcome:
    report: RunReport
    model: GoalModel | None = None
    net: WfaNet | None = None
    trace: MappingTrace | None = None
    facts: str | None = None


def _load_model(report: RunReport, text: str, path: str) -> GoalModel | None:
    parsed = parse_goal_model(text, path)
    if isinstance(parsed, list):
        report.stage("parse", "failed", f"{len(parsed)} diagnostics")
        for d in parsed:
            report.diagnose(d.severity, str(d))
        return None
    report.stage("parse", "ok")
    errors = validate_model(parsed)
    if errors:
        report.stage("validate", "failed", f"{len(errors)} errors")
        for e in errors:
            report.diagnose("error", f"{path}: error: {e}")
        return None
    report.stage("validate", "ok")
    return parsed


def _analyze(report: RunReport, model: GoalModel, path: str) -> list[IqVerdict] | None:
    try:
        verdicts = analyze_all(model)
    except InconsistentTimestamps as exc:
        report.stage("iq", "failed", "inconsistent timestamps")
        for p in exc.problems:
            report.diagnose("error", f"{path}: error: inconsistent timestamps: {p}")
        return None
    report.verdicts = verdicts
    report.stage("iq", "ok", f"{len(verdicts)} verdicts, {sum(not v.satisfied for v in verdicts)} unsatisfied")
    return verdicts


def _verify(report: RunReport, model, net, trace, verdicts, bound, strict_optional_reads) -> None:
    well_formed = not net.structural_problems()
    control = control_soundness(net, bound) if well_formed else None
    try:
        report.violations = check_all(model, net, trace, verdicts, control, bound=bound,
                                      strict_optional_reads=strict_optional_reads)
    except InputMismatch as exc:
        report.stage("verify", "failed", str(exc))
        report.diagnose("error", f"error: {exc}")
        return
    if well_formed:
        report.soundness["control_flow"] = _soundness_dict(control)
        try:
            wfa = check_soundness(net, bound=bound, info_flow=True, iq_blocked=trace.iq_blocked)
        except BoundExceeded as exc:
            wfa = exc
        report.soundness["wfa"] = _soundness_dict(wfa)
    errors = sum(v.is_error for v in report.violations)
    report.stage("verify", "ok", f"{errors} violations")


def _build(command: str, path: str, text: str, emit_facts: bool = False) -> tuple[Outcome, list | None]:
    """Parse, validate, analyze and map one goal model."""
    report = RunReport(command, inputs=[(path, digest(text))])
    out = Outcome(report)
    model = out.model = _load_model(report, text, path)
    if model is None:
        return out, None
    if emit_facts:
        out.facts = format_facts(evaluate_model(model).atoms)
    verdicts = _analyze(report, model, path)
    if verdicts is None:
        return out, None
    try:
        out.net, out.trace = map_to_net(model, verdicts=verdicts)
    except MappingError as exc:
        report.stage("map", "failed", exc.kind)
        report.diagnose("error", f"{path}: error: {exc}")
        return out, None
    report.stage("map", "ok", f"{len(out.net.transitions)} transitions, {len(out.net.places)} places")
    return out, verdicts


def run_check(path: str, text: str, *, bound: int = 1, strict_optional_reads: bool = False,
              emit_facts: bool = False) -> Outcome:
    """The full pipeline on one goal model."""
    out, verdicts = _build(f"check {path}", path, text, emit_facts)
    if verdicts is not None:
        _verify(out.report, out.model, out.net, out.trace, verdicts, bound, strict_optional_reads)
    return out


def run_map(path: str, text: str) -> Outcome:
    return _build(f"map {path}", path, text)[0]


def run_verify(model_path: str, model_text: str, net_path: str, net_text: str,
               trace_text: str | None = None, *, bound: int = 1,
               strict_optional_reads: bool = False) -> Outcome:
    """Check a possibly hand-written net against its goal model (all 21 properties)."""
    inputs = [(model_path, digest(model_text)), (net_path, digest(net_text))]
    report = RunReport(f"verify {model_path} {net_path}", inputs=inputs)
    out = Outcome(report)
    model = out.model = _load_model(report, model_text, model_path)
    if model is None:
        return out
    net, diags = parse_wfa_net_with_warnings(net_text, net_path, strict=False)
    for d in diags:
        # structural findings are reported as C1/C2 violations instead
        if d.severity == "error":
            report.diagnose("error", str(d))
    if net is None:
        report.stage("parse-net", "failed", f"{len(diags)} diagnostics")
        return out
    report.stage("parse-net", "ok")
    out.net = net
    verdicts = _analyze(report, model, model_path)
    if verdicts is None:
        return out
    out.trace = MappingTrace.from_json(trace_text) if trace_text is not None else derive_trace(model, verdicts)
    _verify(report, model, net, out.trace, verdicts, bound, strict_optional_reads)
    return out


def read_text(path: str | Path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()
