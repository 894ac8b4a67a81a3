import logging
import math
from typing import List, Optional

from explicit.terms import explicit_terms
from models import (
    CesaroParams,
    ComparisonReport,
    FormulaConvention,
    LambdaTable,
    SquareSupport,
    ZeroSet,
)
from rsp.cesaro import cesaro_lhs
from utilities.constants import (
    CRITICAL_K,
    CRITICAL_K_WARNING,
    EMPTY_ZEROS_WARNING,
    PRINTED_CONVENTION_WARNING,
)
from utilities.exceptions import OverflowSentinelError
from zeros.table import truncate

logger = logging.getLogger(__name__)


def compare(
    params: CesaroParams,
    table: LambdaTable,
    support: SquareSupport,
    zeros: ZeroSet,
    T: float,
    convention: FormulaConvention = FormulaConvention.DERIVED,
    secondary: bool = False,
    pair_reduced: bool = False,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> ComparisonReport:
    """Cesàro LHS against M1 + M2 + M3 + M4 with zeros truncated at height T."""
    warnings: List[str] = []
    if params.k <= CRITICAL_K:
        warnings.append(CRITICAL_K_WARNING)
        logger.warning(f"⚠️ k={params.k}: {CRITICAL_K_WARNING}")
    if convention == FormulaConvention.PRINTED:
        warnings.append(PRINTED_CONVENTION_WARNING)

    truncated = truncate(zeros, T)
    if truncated.count == 0:
        warnings.append(EMPTY_ZEROS_WARNING)
        logger.warning(EMPTY_ZEROS_WARNING)

    lhs = cesaro_lhs(params, table, support)
    terms = explicit_terms(
        params.N,
        params.k,
        truncated,
        convention=convention,
        pair_reduced=pair_reduced,
        secondary=secondary,
        term_budget=term_budget,
        threads=threads,
    )
    report = ComparisonReport.assemble(params, lhs, terms, warnings)
    if not math.isfinite(report.residual):
        raise OverflowSentinelError(f"residual is not finite at N={params.N}, k={params.k}")

    logger.info(
        f"Compared N={params.N} k={params.k} T={T}: "
        f"lhs/m1={lhs / terms.m1:.6f}, normalized residual={report.normalized_residual:.6g}"
    )
    return report
