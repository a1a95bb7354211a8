"""Command-line front end: ``wfav check|map|verify|export``.

Exit codes: 0 clean, 1 violations or diagnostics, 2 I/O or internal error.
``WFAV_COLOR=1`` turns on ANSI colour in text reports.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .engine import BoundExceeded, net_to_dot, reachability_graph, reachability_to_dot
from .parser import ParseError, load_wfa_net, print_wfa_net
from .pipeline import EXIT_ERROR, EXIT_FINDINGS, EXIT_OK, Outcome, read_text, run_check, run_map, run_verify


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wfav", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wfav {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def report_flags(p):
        p.add_argument("--bound", type=_positive, default=1, help="token bound per place (default 1)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--report", metavar="PATH", help="write the report here instead of stdout")
        p.add_argument("--strict-optional-reads", action="store_true",
                       help="treat unbelievable optional reads as violations")

    p = sub.add_parser("check", help="run the full pipeline on goal models")
    p.add_argument("models", nargs="+", metavar="MODEL.gqm")
    report_flags(p)
    p.add_argument("--out-dir", default=".", help="where mapped nets and traces are written (default .)")
    p.add_argument("--emit-facts", metavar="PATH", help="write the Datalog facts and derived atoms here")

    p = sub.add_parser("map", help="map a goal model to a WFA-net")
    p.add_argument("model", metavar="MODEL.gqm")
    p.add_argument("-o", "--output", required=True, metavar="NET.wfa")
    p.add_argument("--trace", metavar="PATH", help="trace file (default: NET.trace)")

    p = sub.add_parser("verify", help="check a WFA-net against its goal model")
    p.add_argument("model", metavar="MODEL.gqm")
    p.add_argument("net", metavar="NET.wfa")
    p.add_argument("--trace", metavar="PATH", help="trace file (default: NET.trace if present)")
    report_flags(p)

    p = sub.add_parser("export", help="write a net or its reachability graph as DOT")
    p.add_argument("net", metavar="NET.wfa")
    p.add_argument("--reachability", action="store_true")
    p.add_argument("--bound", type=_positive, default=1)
    p.add_argument("-o", "--output", metavar="PATH")
    return parser


def _color() -> bool:
    return os.environ.get("WFAV_COLOR", "0") == "1"


def _write(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit_reports(outcomes: list[Outcome], args) -> None:
    if args.format == "json":
        text = json.dumps([o.report.to_dict() for o in outcomes], indent=2, sort_keys=True) + "\n"
    else:
        text = "".join(o.report.to_text(color=_color() and not args.report) for o in outcomes)
    if args.report:
        _write(args.report, text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    outcomes = []
    facts = []
    for path in args.models:
        out = run_check(path, read_text(path), bound=args.bound,
                        strict_optional_reads=args.strict_optional_reads,
                        emit_facts=bool(args.emit_facts))
        outcomes.append(out)
        if out.facts is not None:
            facts.append(out.facts)
        if out.net is not None:
            stem = Path(args.out_dir) / Path(path).stem
            _write(stem.with_suffix(".wfa"), print_wfa_net(out.net))
            _write(stem.with_suffix(".trace"), out.trace.to_json())
    if args.emit_facts:
        _write(args.emit_facts, "".join(facts))
    _emit_reports(outcomes, args)
    return max(o.report.exit_code for o in outcomes)


def cmd_map(args) -> int:
    out = run_map(args.model, read_text(args.model))
    if out.net is None:
        sys.stderr.write(out.report.to_text(color=_color()))
        return out.report.exit_code
    _write(args.output, print_wfa_net(out.net))
    _write(args.trace or Path(args.output).with_suffix(".trace"), out.trace.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    trace_path = args.trace or Path(args.net).with_suffix(".trace")
    trace_text = None
    if args.trace or Path(trace_path).exists():
        trace_text = read_text(trace_path)
    out = run_verify(args.model, read_text(args.model), args.net, read_text(args.net), trace_text,
                     bound=args.bound, strict_optional_reads=args.strict_optional_reads)
    _emit_reports([out], args)
    return out.report.exit_code


def cmd_export(args) -> int:
    try:
        net = load_wfa_net(args.net)
    except ParseError as exc:
        for d in exc.diagnostics:
            sys.stderr.write(f"{d}\n")
        return EXIT_FINDINGS
    if args.reachability:
        try:
            text = reachability_to_dot(reachability_graph(net, bound=args.bound))
        except BoundExceeded as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_FINDINGS
    else:
        text = net_to_dot(net)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"check": cmd_check, "map": cmd_map, "verify": cmd_verify, "export": cmd_export}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        sys.stderr.write(f"wfav: error: {exc}\n")
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - keep the exit-code contract on bugs too
        sys.stderr.write(f"wfav: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
