"""Command line entry point.

    gradcalc run <file> [--format text|json] [--seed N] [--samples N]
    gradcalc check-suite [--format text|json] [--seed N]

`run -` reads the script from stdin.  Exit status: 0 clean, 1 a check
command failed, 2 the script did not parse (lexical, syntax or name
error), 3 a well-formed statement failed at runtime.  JSON output is
deterministic for a given script and seed; the text format adds
per-statement timings.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .dsl import execute, parse, records_to_json
from .errors import DslError
from .suite import render_table, run_check_suite, suite_to_json


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gradcalc",
        description="exact tensor calculus on graded charts")
    ap.add_argument("--version", action="version",
                    version=f"gradcalc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a script (- for stdin)")
    run.add_argument("file", help="script path, or - for stdin")
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--seed", type=int, default=0,
                     help="seed for sampling checks (default 0)")
    run.add_argument("--samples", type=int, default=8,
                     help="sample points per probabilistic check (default 8)")

    suite = sub.add_parser("check-suite", help="run the verification battery")
    suite.add_argument("--format", choices=("text", "json"), default="text")
    suite.add_argument("--seed", type=int, default=42,
                       help="master seed for the battery (default 42)")
    return ap


def _cmd_run(args) -> int:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            print(f"gradcalc: cannot read {args.file}: {e.strerror}",
                  file=sys.stderr)
            return 2
    try:
        script = parse(text)
    except DslError as e:
        if args.format == "json":
            doc = {"gradcalc_version": __version__, "schema": 1,
                   "error": {"kind": e.kind, "line": e.line, "col": e.col,
                             "message": e.args[0]}}
            print(json.dumps(doc, indent=2))
        else:
            print(str(e), file=sys.stderr)
        return 2
    records, code = execute(script, seed=args.seed, samples=args.samples)
    if args.format == "json":
        print(json.dumps(records_to_json(records), indent=2))
    else:
        for rec in records:
            status = "ok" if rec.ok else "FAIL"
            print(f"[{status} {rec.ms:7.1f} ms] {rec.stmt}")
            for line in rec.text:
                print(f"    {line}")
    return code


def _cmd_suite(args) -> int:
    results, code = run_check_suite(args.seed)
    if args.format == "json":
        print(json.dumps(suite_to_json(results), indent=2))
    else:
        print(render_table(results))
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_suite(args)


if __name__ == "__main__":
    sys.exit(main())
