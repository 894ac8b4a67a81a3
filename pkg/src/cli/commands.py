import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from cli.reports import ScanWriter
from cli.schemas import Check, ScanRow
from cli.suites import SuiteContext, run_suite
from explicit.compare import compare
from models import (
    CesaroParams,
    ComparisonReport,
    FormulaConvention,
    LambdaTable,
    Method,
    RunConfig,
    SquareSupport,
    ZeroSet,
)
from rsp.cesaro import cesaro_lhs
from rsp.representation import rsp_table, write_rsp_csv
from sieve.cache import load_or_build
from sieve.lambda_table import square_support
from utilities.constants import EMPTY_ZEROS_WARNING
from utilities.exceptions import ConfigError
from zeros.table import describe_zeros, load_zeros

logger = logging.getLogger(__name__)


def _inputs(limit: int, cache_dir: Path) -> Tuple[LambdaTable, SquareSupport]:
    table, _, _ = load_or_build(max(limit, 1), cache_dir)
    return table, square_support(table, max(limit, 1))


def _zeros(config: RunConfig) -> ZeroSet:
    if config.zeros is None:
        logger.warning(f"No --zeros given: {EMPTY_ZEROS_WARNING}")
        return ZeroSet(gammas=np.empty(0), source="none")
    return load_zeros(config.zeros)


def cmd_sieve(limit: int, cache_dir: Path) -> Dict[str, Any]:
    """Build or reuse the cached Λ table for a limit."""
    table, path, hit = load_or_build(limit, cache_dir)
    return {
        "limit": table.limit,
        "cache_file": str(path),
        "cache_hit": hit,
        "prime_powers": int(table.prime_powers.shape[0]),
    }


def cmd_rsp(limit: int, cache_dir: Path, output: Optional[Path], stream: TextIO) -> Dict[str, Any]:
    table, support = _inputs(limit, cache_dir)
    rsp = rsp_table(table, support, limit)
    write_rsp_csv(rsp, output if output is not None else stream)
    return {"limit": limit, "output": str(output) if output else "-"}


def cmd_lhs(config: RunConfig, method: Method) -> Dict[str, Any]:
    if config.N is None or config.k is None:
        raise ConfigError("lhs needs --N and --k")
    params = CesaroParams(N=config.N, k=config.k, method=method)
    table, support = _inputs(config.N, config.cache_dir)
    return {
        "N": params.N,
        "k": params.k,
        "method": params.method,
        "lhs": cesaro_lhs(params, table, support),
    }


def cmd_compare(
    config: RunConfig,
    convention: FormulaConvention = FormulaConvention.DERIVED,
    secondary: bool = False,
    pair_reduced: bool = False,
) -> ComparisonReport:
    if config.N is None or config.k is None:
        raise ConfigError("compare needs --N and --k")
    params = CesaroParams(N=config.N, k=config.k)
    table, support = _inputs(config.N, config.cache_dir)
    return compare(
        params,
        table,
        support,
        _zeros(config),
        config.T,
        convention=convention,
        secondary=secondary,
        pair_reduced=pair_reduced,
        term_budget=config.term_budget,
        threads=config.threads,
    )


def cmd_scan(
    config: RunConfig,
    n_grid: Sequence[int],
    k_grid: Sequence[float],
    stream: TextIO,
    convention: FormulaConvention = FormulaConvention.DERIVED,
) -> int:
    """One compare row per (N, k), N outermost; rows are flushed as they are produced."""
    writer = ScanWriter(stream)
    writer.write_header()
    if not n_grid or not k_grid:
        return 0

    table, _ = _inputs(max(n_grid), config.cache_dir)
    zeros = _zeros(config)
    for N in n_grid:
        support = square_support(table, N)
        for k in k_grid:
            report = compare(
                CesaroParams(N=N, k=k),
                table,
                support,
                zeros,
                config.T,
                convention=convention,
                term_budget=config.term_budget,
                threads=config.threads,
            )
            writer.write_row(ScanRow.from_report(report))
    return writer.rows


def cmd_verify(suite: str, config: RunConfig) -> List[Check]:
    return run_suite(suite, SuiteContext(config.cache_dir, config.zeros))


def cmd_zeros_info(path: Path) -> Dict[str, Any]:
    return describe_zeros(load_zeros(path))
