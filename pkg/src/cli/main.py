import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from cli.commands import (
    cmd_compare,
    cmd_lhs,
    cmd_rsp,
    cmd_scan,
    cmd_sieve,
    cmd_verify,
    cmd_zeros_info,
)
from cli.reports import write_checks, write_mapping, write_report
from cli.schemas import ReportSchema
from config import settings
from models import FormulaConvention, Method, OutputFormat, RunConfig
from utilities.exceptions import AnalyticError, ConfigError
from utilities.utils import configure_threads

logger = logging.getLogger(__name__)

VERIFY_FAILED = 1


def _int_grid(text: str) -> List[int]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer grid {text!r}") from None
    for value in values:
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f"grid value {value} is not an integer")
    return [int(value) for value in values]


def _float_grid(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float grid {text!r}") from None


def _add_run_arguments(parser: argparse.ArgumentParser, needs_nk: bool = True) -> None:
    if needs_nk:
        parser.add_argument("--N", type=int, required=True, help="Cesàro length N")
        parser.add_argument("--k", type=float, required=True, help="Cesàro order k >= 0")
    parser.add_argument(
        "--T", type=float, default=settings.DEFAULT_T, help="Zero truncation height"
    )
    parser.add_argument("--zeros", type=Path, help="Zero table (one γ or 'β γ' per line)")
    parser.add_argument(
        "--term-budget",
        type=int,
        default=settings.TERM_BUDGET,
        help="Refuse zero sums with more terms than this",
    )


def _add_formula_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--convention",
        choices=[c.value for c in FormulaConvention],
        default=FormulaConvention.DERIVED.value,
        help="Sign and denominator convention for M2 and M4",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsp",
        description="Cesàro averages of prime plus two prime squares against the zero-sum explicit formula",
    )
    parser.add_argument(
        "--cache-dir",
        type=Path,
        default=settings.CACHE_DIR,
        help="Directory for Λ caches (env RSP_CACHE_DIR)",
    )
    parser.add_argument("--threads", type=int, default=settings.THREADS)
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    parser.add_argument("--quiet", "-q", action="store_true", help="Only log warnings")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="Build and cache the Λ table")
    p.add_argument("--limit", type=int, required=True)

    p = sub.add_parser("rsp", help="Export r_SP(n) as CSV")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--output", type=Path, help="CSV file (stdout when omitted)")

    p = sub.add_parser("lhs", help="Cesàro left-hand side only")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.DIRECT.value)

    p = sub.add_parser("compare", help="LHS against M1 + M2 + M3 + M4")
    _add_run_arguments(p)
    _add_formula_arguments(p)
    p.add_argument("--secondary", action="store_true", help="Also report the -log 2π terms")
    p.add_argument("--pair-reduced", action="store_true", help="Sum conjugate pairs as 2·Re")

    p = sub.add_parser("scan", help="Compare over an N × k grid, CSV out")
    p.add_argument("--N-grid", type=_int_grid, default=[], help="Comma separated N values")
    p.add_argument("--k-grid", type=_float_grid, default=[], help="Comma separated k values")
    p.add_argument("--output", type=Path, help="CSV file (stdout when omitted)")
    _add_run_arguments(p, needs_nk=False)
    _add_formula_arguments(p)

    p = sub.add_parser("verify", help="Run a verification suite")
    p.add_argument("suite", help="laplace, stirling, lemma2, lemma3, gamma, pnt or generating")
    p.add_argument("--zeros", type=Path, help="Zero table for the lemma suites")

    p = sub.add_parser("zeros", help="Zero table tools")
    zsub = p.add_subparsers(dest="zeros_command", required=True)
    info = zsub.add_parser("info", help="Count, γ range and β policy")
    info.add_argument("path", type=Path)

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        N=getattr(args, "N", None),
        k=getattr(args, "k", None),
        T=getattr(args, "T", settings.DEFAULT_T),
        zeros=getattr(args, "zeros", None),
        cache_dir=args.cache_dir,
        output_format=OutputFormat(args.format) if args.format else None,
        threads=args.threads,
        term_budget=getattr(args, "term_budget", settings.TERM_BUDGET),
        verbosity=1 if args.verbose else (-1 if args.quiet else 0),
    )


def _configure_logging(verbosity: int) -> None:
    log_level = logging.INFO
    if verbosity > 0:
        log_level = logging.DEBUG
    elif verbosity < 0:
        log_level = logging.WARNING
    logging.basicConfig(
        level=log_level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )


def dispatch(args: argparse.Namespace, stream=None) -> int:
    stream = stream or sys.stdout
    config = _run_config(args)
    _configure_logging(config.verbosity)
    logger.debug(f"Running {args.command} with cache dir {config.cache_dir}")
    configure_threads(config.threads)
    fmt = config.output_format

    if args.command == "sieve":
        write_mapping(cmd_sieve(args.limit, config.cache_dir), fmt or OutputFormat.TEXT, stream)
    elif args.command == "rsp":
        result = cmd_rsp(args.limit, config.cache_dir, args.output, stream)
        logger.info(f"r_SP table up to {result['limit']} written to {result['output']}")
    elif args.command == "lhs":
        write_mapping(cmd_lhs(config, Method(args.method)), fmt or OutputFormat.TEXT, stream)
    elif args.command == "compare":
        report = cmd_compare(
            config,
            convention=FormulaConvention(args.convention),
            secondary=args.secondary,
            pair_reduced=args.pair_reduced,
        )
        write_report(ReportSchema.from_report(report), fmt or OutputFormat.JSON, stream)
    elif args.command == "scan":
        convention = FormulaConvention(args.convention)
        if args.output is not None:
            try:
                with open(args.output, "w", newline="", encoding="utf-8") as f:
                    rows = cmd_scan(config, args.N_grid, args.k_grid, f, convention)
            except OSError as e:
                raise OSError(f"cannot write scan output {args.output}: {e}") from e
        else:
            rows = cmd_scan(config, args.N_grid, args.k_grid, stream, convention)
        logger.info(f"Scan finished: {rows} rows")
    elif args.command == "verify":
        checks = cmd_verify(args.suite, config)
        write_checks(checks, fmt or OutputFormat.JSON, stream)
        if not all(check.passed for check in checks):
            return VERIFY_FAILED
    elif args.command == "zeros":
        write_mapping(cmd_zeros_info(args.path), fmt or OutputFormat.TEXT, stream)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and map failures to exit codes"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        return dispatch(args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return ConfigError.exit_code
    except AnalyticError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return ConfigError.exit_code


if __name__ == "__main__":
    exit_code = main()
    exit(exit_code)
