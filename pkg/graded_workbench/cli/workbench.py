"""Command line: `graded_workbench analyze | selftest | search`.

Exit codes: 0 ok, 1 a check failed, 2 bad input, 3 genericity failure.
"""

import argparse
import asyncio
import json
import logging
import sys
from typing import Optional, Sequence

from graded_workbench.algebra.polynomial import order_from_name
from graded_workbench.cli.ideal_file import curve_ideal, load_ideal_file
from graded_workbench.cli.report import echo_ideal, render_report, run_analysis
from graded_workbench.cli.search import build_space, run_search
from graded_workbench.cli.selftest import REFERENCE_CHAR, SELFTEST_CHECKS, run_selftest
from graded_workbench.errors import InputError, WorkbenchError
from graded_workbench.settings import (
    WORKBENCH_LOG_LEVEL,
    WORKBENCH_ORACLE,
    WORKBENCH_ORDER,
    WORKBENCH_SEARCH_DB,
    WORKBENCH_SEARCH_SINK,
    WORKBENCH_SEARCH_WORKERS,
    WORKBENCH_SEED,
    WORKBENCH_TRIALS,
)

log = logging.getLogger(__name__)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=None, help="Characteristic p (overrides the file header)")
    common.add_argument("--seed", type=int, default=WORKBENCH_SEED, help="Master seed for every random choice")
    common.add_argument("--trials", type=int, default=WORKBENCH_TRIALS, help="Agreeing trials for generic choices")
    common.add_argument("--json", action="store_true", help="Emit JSON instead of text")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="graded_workbench",
        description="Invariants, Betti tables and componentwise linearity of graded ideals.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="Analyze an ideal file or a curve in P^3")
    analyze.add_argument("path", nargs="?", help="Ideal file (char/vars header, one generator per line)")
    analyze.add_argument("--curve", help='Four binary forms in s, t, e.g. "s^5, s^4*t+s^3*t^2, s*t^4, t^5"')
    analyze.add_argument("--method", choices=["linear", "elimination"], default="linear")
    analyze.add_argument("--order", choices=["degrevlex", "lex"], default=WORKBENCH_ORDER)
    analyze.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=WORKBENCH_ORACLE)
    analyze.add_argument("--gin", action=argparse.BooleanOptionalAction, default=True)
    analyze.add_argument("--timings", action="store_true", help="Report per-stage wall time")

    selftest = sub.add_parser("selftest", parents=[common], help="Run the built-in acceptance checks")
    selftest.add_argument("--only", action="append", choices=sorted(SELFTEST_CHECKS), help="Run only this check")

    search = sub.add_parser("search", parents=[common], help="Sample curves and record almost maximal witnesses")
    search.add_argument("--budget", type=int, default=10, help="Number of parametrizations to try")
    search.add_argument("--space", default=None, help="JSON search space, e.g. '{\"degree\": 6, \"terms\": 2}'")
    search.add_argument("--candidate", action="append", default=None, help="Fixed parametrization to sample from")
    search.add_argument("--sink", default=WORKBENCH_SEARCH_SINK, help="Append-only JSONL file of witnesses")
    search.add_argument("--db", default=WORKBENCH_SEARCH_DB, help="sqlite dedup index")
    search.add_argument("--workers", type=int, default=WORKBENCH_SEARCH_WORKERS)
    return parser


def cmd_analyze(args: argparse.Namespace) -> int:
    if bool(args.path) == bool(args.curve):
        raise InputError("give either an ideal file or --curve")
    if args.curve:
        ideal = curve_ideal(args.curve, args.char, method=args.method)
        echo = echo_ideal(ideal, "curve", args.curve)
    else:
        ideal = load_ideal_file(args.path, char=args.char).ideal
        echo = echo_ideal(ideal, "file", args.path)
    report = run_analysis(
        ideal,
        echo,
        args.seed,
        order=order_from_name(args.order),
        oracle=args.oracle,
        trials=args.trials,
        gin=args.gin,
        timings=args.timings,
    )
    sys.stdout.write(render_report(report, "json" if args.json else "text"))
    return 1 if report.failed else 0


def cmd_selftest(args: argparse.Namespace) -> int:
    char = args.char if args.char is not None else REFERENCE_CHAR
    report = run_selftest(seed=args.seed, char=char, only=args.only)
    sys.stdout.write(report.to_json() if args.json else report.render_text())
    return 1 if report.failed else 0


def _hit_summary(line: dict) -> dict:
    return {k: line[k] for k in ("key", "forms", "e", "r", "cwl")}


def cmd_search(args: argparse.Namespace) -> int:
    overrides = {}
    if args.space:
        try:
            overrides = json.loads(args.space)
        except json.JSONDecodeError as e:
            raise InputError(f"--space is not valid JSON: {e}") from e
        if not isinstance(overrides, dict):
            raise InputError(f"--space must be a JSON object, got {type(overrides).__name__}")
    if args.candidate:
        overrides = {**overrides, "candidates": args.candidate}
    space = build_space(overrides)

    def emit(line: dict) -> None:
        h = _hit_summary(line)
        if args.json:
            sys.stdout.write(json.dumps({"hit": h}, sort_keys=True) + "\n")
        else:
            sys.stdout.write(f"{h['key']}  e={h['e']} r={h['r']} cwl={h['cwl']}  {h['forms']}\n")
        sys.stdout.flush()

    kwargs = {"sink": args.sink, "db_path": args.db, "workers": args.workers, "trials": args.trials}
    if args.char is not None:
        kwargs["char"] = args.char
    result = asyncio.run(run_search(space, args.budget, args.seed, on_hit=emit, **kwargs))
    summary = {
        "trials_run": result.trials_run,
        "hits": [_hit_summary(h) for h in result.hits],
        "duplicates": result.duplicates,
        "errors": result.errors,
        "aborted": result.aborted,
    }
    if args.json:
        sys.stdout.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"{result.trials_run} trials, {len(result.hits)} new witnesses, {result.duplicates} duplicates\n")
    if result.aborted:
        sys.stderr.write(f"search aborted: {result.error}\n")
        return 2
    return 0


COMMANDS = {"analyze": cmd_analyze, "selftest": cmd_selftest, "search": cmd_search}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=WORKBENCH_LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    try:
        return COMMANDS[args.cmd](args)
    except WorkbenchError as e:
        log.error(f"{type(e).__name__}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
