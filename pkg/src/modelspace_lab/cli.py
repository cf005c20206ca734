"""Command line: ``modelspace-lab verify <suite> [options]``."""

from __future__ import annotations

import argparse
import sys

from .harness import SUITES, Scenario, emit_report, run_suite


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} needs a number, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modelspace-lab")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a seeded verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=20, help="number of instances")
    v.add_argument("--deg", type=int, default=8, help="degree cap (at most 12)")
    v.add_argument("--n", type=int, default=3, help="defect index cap (at most 3)")
    v.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
    v.add_argument("--out", default="-", help="report path, '-' for stdout")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = Scenario(
            suite=args.suite,
            seed=args.seed,
            degree_cap=args.deg,
            n_cap=args.n,
            instance_count=args.count,
            tolerances=dict(args.tol),
        )
    except (ValueError, KeyError) as e:
        print(f"modelspace-lab: {e.args[0] if e.args else e}", file=sys.stderr)
        return 2
    report = run_suite(scenario, jobs=args.jobs)
    try:
        emit_report(report, args.out)
    except OSError as e:
        print(f"modelspace-lab: cannot write report: {e}", file=sys.stderr)
        return 2
    s = report.summary
    print(
        f"{scenario.suite}: {s['pass']} pass, {s['fail']} fail, "
        f"{s['inconclusive']} inconclusive, {s['rejected']} rejected",
        file=sys.stderr,
    )
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
