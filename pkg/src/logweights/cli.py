"""Command line front-end: gen, analyze, report.

Exit codes: 0 success, 1 schema error (bad input documents), 2 computation
or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .counterexample import build_counterexample
from .report import (
    ComputationError,
    SpecError,
    emit_report,
    parse_spec,
    run_analysis,
)
from .sequences import make_family, sequence_to_json
from .verdicts import dumps_stable

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_COMPUTE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logweights",
        description="Weight-sequence growth analysis in log scale")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a builtin or counter-example sequence as JSON")
    gen.add_argument("--family", choices=["gevrey", "q_gevrey", "double_exp", "constant_one"])
    gen.add_argument("--params", default="{}",
                     help="family parameters as a JSON object, e.g. '{\"s\": 1}'")
    gen.add_argument("--counterexample", default=None,
                     help="counter-example options as JSON, e.g. "
                          "'{\"levels\": 8, \"variant\": [\"minimal\"]}'")
    gen.add_argument("--horizon", type=int, default=512)
    gen.add_argument("--out", default=None, help="output path (stdout when omitted)")
    gen.add_argument("--schedule-out", default=None,
                     help="also write the counter-example schedule JSON here")

    analyze = sub.add_parser("analyze", help="run an analysis spec to a report bundle")
    analyze.add_argument("--spec", required=True, help="path to the analysis spec JSON")
    analyze.add_argument("--horizon", type=int, default=None, help="horizon override")
    analyze.add_argument("--d-max", type=int, default=None)
    analyze.add_argument("--grid", default=None,
                         help="matrix index grid as comma-separated positives")
    analyze.add_argument("--out", default=None, help="bundle path (stdout when omitted)")

    report = sub.add_parser("report", help="emit files from a report bundle")
    report.add_argument("--bundle", required=True, help="path to a bundle JSON")
    report.add_argument("--format", choices=["json", "csv", "plotdata"], default="json")
    report.add_argument("--out", required=True, help="output directory")
    report.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering for plotdata")
    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    if (args.family is None) == (args.counterexample is None):
        print("gen: pass exactly one of --family / --counterexample", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        if args.family is not None:
            params = json.loads(args.params)
            seq = make_family(args.family, params, args.horizon)
            doc = sequence_to_json(seq)
        else:
            opts = json.loads(args.counterexample)
            spec, seq = build_counterexample(
                levels=int(opts.get("levels", 8)),
                variant=tuple(opts.get("variant", ["minimal"])),
                b1=float(opts.get("b1", 1.0)))
            doc = sequence_to_json(seq)
            doc["schedule"] = spec.to_jsonable()
            if args.schedule_out:
                with open(args.schedule_out, "w") as fh:
                    fh.write(dumps_stable(spec.to_jsonable()) + "\n")
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    text = dumps_stable(doc) + "\n"
    try:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        with open(args.spec) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"analyze: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        spec = parse_spec(text)
    except SpecError as exc:
        for path, msg in exc.problems:
            print(f"analyze: spec error at {path}: {msg}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.horizon is not None or args.d_max is not None or args.grid is not None:
        doc = json.loads(text)
        if args.horizon is not None:
            doc["horizon"] = args.horizon
        if args.d_max is not None:
            doc["d_max"] = args.d_max
        if args.grid is not None:
            try:
                doc["grid"] = [float(g) for g in args.grid.split(",") if g]
            except ValueError:
                print(f"analyze: bad --grid '{args.grid}'", file=sys.stderr)
                return EXIT_SCHEMA
        try:
            spec = parse_spec(json.dumps(doc))
        except SpecError as exc:
            for path, msg in exc.problems:
                print(f"analyze: spec error at {path}: {msg}", file=sys.stderr)
            return EXIT_SCHEMA
    try:
        bundle = run_analysis(spec)
    except ComputationError as exc:
        print(f"analyze: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = dumps_stable(bundle) + "\n"
    try:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"analyze: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    try:
        with open(args.bundle) as fh:
            bundle = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"report: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        written = emit_report(bundle, args.format, args.out,
                              figures=not args.no_figures)
    except ValueError as exc:
        print(f"report: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"report: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for path in written:
        print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "gen":
        return _cmd_gen(args)
    if args.command == "analyze":
        return _cmd_analyze(args)
    return _cmd_report(args)


if __name__ == "__main__":
    sys.exit(main())
