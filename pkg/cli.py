"""
Command line front end for the Chevalley kernel.

    python cli.py roots --system G2 --alpha "[1,0]"
    python cli.py check --system A2 --ring zmod:4 --suites all
    python cli.py decompose --system A2 --ring gf:3 --word "x[0,-1](1) * x[1,0](2)"
    python cli.py interp --system A2 --ring gf:2 --direction ring

Reports are JSON on stdout (or --out). Exit codes: 0 all checks pass,
1 verification failure, 2 usage error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import BaseModel

from models import Direction, RunConfig, Suite
from services.errors import ChevalleyError
from services.group import DEFAULT_CAP
from services.interp import THETA_PAIRS
from services.reports import decompose_report, interp_report, roots_report
from services.suites import run_check

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chevalley", description="Chevalley group kernel checks")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level (stderr)")
    commands = parser.add_subparsers(dest="command", required=True)

    roots = commands.add_parser("roots", help="Roots, B-set and deletion trace")
    roots.add_argument("--system", required=True)
    roots.add_argument("--alpha", required=True, help='Root literal, e.g. "[1,0]"')
    roots.add_argument("--out")

    check = commands.add_parser("check", help="Run verification suites")
    check.add_argument("--system", required=True)
    check.add_argument("--ring", required=True)
    check.add_argument("--suites", nargs="+", default=["all"],
                       help=f"Any of: all, {', '.join(s.value for s in Suite)}")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--cap", type=int, default=DEFAULT_CAP)
    check.add_argument("--samples", type=int, default=1000)
    check.add_argument("--width-cap", type=int, default=4)
    check.add_argument("--out")

    decompose = commands.add_parser("decompose", help="Gauss decomposition of a generator word")
    decompose.add_argument("--system", required=True)
    decompose.add_argument("--ring", required=True)
    decompose.add_argument("--word", default="")
    decompose.add_argument("--out")

    interp = commands.add_parser("interp", help="Ring or group round trip")
    interp.add_argument("--system", required=True)
    interp.add_argument("--ring", required=True)
    interp.add_argument("--direction", required=True, help="ring or group")
    interp.add_argument("--seed", type=int, default=0)
    interp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    interp.add_argument("--pairs", type=int, default=THETA_PAIRS)
    interp.add_argument("--out")
    return parser


def _suite_names(values: List[str]) -> List[str]:
    """Accept both space- and comma-separated suite lists."""
    return [name for value in values for name in value.split(",") if name]


def _emit(report: BaseModel, out: Optional[str]) -> None:
    text = report.model_dump_json(by_alias=True, indent=2) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _run(args: argparse.Namespace) -> int:
    if args.command == "roots":
        report = roots_report(args.system, args.alpha)
        _emit(report, args.out)
        return EXIT_OK if report.covered else EXIT_FAILED
    if args.command == "check":
        config = RunConfig(system=args.system, ring=args.ring, suites=_suite_names(args.suites),
                           seed=args.seed, cap=args.cap, samples=args.samples,
                           width_cap=args.width_cap, output=args.out)
        report = run_check(config)
        _emit(report, config.output)
        return EXIT_OK if report.passed else EXIT_FAILED
    if args.command == "decompose":
        report = decompose_report(args.system, args.ring, args.word)
        _emit(report, args.out)
        return EXIT_OK if report.recomposes else EXIT_FAILED
    report = interp_report(args.system, args.ring, Direction(args.direction), seed=args.seed,
                           cap=args.cap, pairs=args.pairs)
    _emit(report, args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args)
    except ValueError as e:
        logger.error("Usage error: %s", e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ChevalleyError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
