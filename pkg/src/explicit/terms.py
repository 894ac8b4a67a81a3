"""
Explicit-formula terms as sums over tuples of zeros.

Every term has the shape

    coefficient · Σ N^{k+e} Π Γ(ρᵢ/dᵢ) / Γ(k + offset + e),   e = shift + Σ ρᵢ/dᵢ,

with the sum over ordered r-tuples of the conjugate-expanded zero list
(r = len(divisors)). Each summand is built in log space and exponentiated once.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from analytic.gamma import log_gamma_array
from config import settings
from models import ExplicitTerms, FormulaConvention, ZeroSet
from utilities.constants import LOG_OVERFLOW_THRESHOLD, SQRT_PI, ZETA_CONSTANT
from utilities.exceptions import ConfigError, OverflowSentinelError, TermBudgetError
from utilities.utils import compensated_sum
from zeros.table import expand_conjugates

logger = logging.getLogger(__name__)


class ExpansionTerm(NamedTuple):
    coefficient: float
    shift: float
    divisors: Tuple[int, ...]
    denominator_offset: float = 1.0


class ZeroSum(NamedTuple):
    value: complex
    envelope: float
    terms: int


M2_TERMS: Dict[FormulaConvention, Tuple[ExpansionTerm, ...]] = {
    FormulaConvention.DERIVED: (
        ExpansionTerm(-math.pi / 4.0, 1.0, (1,)),
        ExpansionTerm(-SQRT_PI / 2.0, 1.5, (2,)),
    ),
    FormulaConvention.PRINTED: (
        ExpansionTerm(math.pi / 4.0, 1.0, (1,)),
        ExpansionTerm(-SQRT_PI / 2.0, 1.5, (2,)),
    ),
}

M3_TERMS: Tuple[ExpansionTerm, ...] = (
    ExpansionTerm(SQRT_PI / 2.0, 0.5, (1, 2)),
    ExpansionTerm(0.25, 1.0, (2, 2)),
)

M4_TERMS: Dict[FormulaConvention, Tuple[ExpansionTerm, ...]] = {
    FormulaConvention.DERIVED: (ExpansionTerm(-0.25, 0.0, (1, 2, 2)),),
    FormulaConvention.PRINTED: (ExpansionTerm(0.25, 0.0, (1, 2, 2), 0.0),),
}

# the -log 2π constant of each S~ expansion, multiplied through the product
_C = ZETA_CONSTANT
SECONDARY_TERMS: Tuple[ExpansionTerm, ...] = (
    ExpansionTerm(_C * SQRT_PI, 1.5, ()),
    ExpansionTerm(-_C, 1.0, (2,)),
    ExpansionTerm(_C * _C, 1.0, ()),
    ExpansionTerm(-_C * SQRT_PI, 0.5, (1,)),
    ExpansionTerm(_C, 0.0, (1, 2)),
    ExpansionTerm(-_C * _C, 0.0, (1,)),
    ExpansionTerm(_C * math.pi / 4.0, 1.0, ()),
    ExpansionTerm(-_C * SQRT_PI / 2.0, 0.5, (2,)),
    ExpansionTerm(_C / 4.0, 0.0, (2, 2)),
    ExpansionTerm(_C * _C * SQRT_PI, 0.5, ()),
    ExpansionTerm(-_C * _C, 0.0, (2,)),
    ExpansionTerm(_C**3, 0.0, ()),
)


def term_count(zero_count: int, order: int, pair_reduced: bool = False) -> int:
    """Summands in an order-r sum over 2·zero_count expanded zeros."""
    if order == 0:
        return 1
    expanded = 2 * zero_count
    if pair_reduced:
        return zero_count * expanded ** (order - 1)
    return expanded**order


def _row_sums(
    log_N: float,
    base: complex,
    first_args: np.ndarray,
    first_logs: np.ndarray,
    inner_args: np.ndarray,
    inner_logs: np.ndarray,
    k_offset: float,
    outer: Sequence[int],
) -> Tuple[complex, float]:
    """Compensated sum over one block of outer indices; innermost index runs fastest."""
    chunks: List[np.ndarray] = []
    for i in outer:
        exponent = base + first_args[i] + inner_args
        log_terms = exponent * log_N + first_logs[i] + inner_logs
        log_terms = log_terms - log_gamma_array(k_offset + exponent)
        peak = float(np.max(log_terms.real))
        if peak > LOG_OVERFLOW_THRESHOLD:
            raise OverflowSentinelError(
                f"zero-sum summand has log-modulus {peak:.1f} > {LOG_OVERFLOW_THRESHOLD}"
            )
        chunks.append(np.exp(log_terms))
    values = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.complex128)
    if values.size == 0:
        return 0j, 0.0
    return complex(compensated_sum(values)), float(compensated_sum(np.abs(values)))


def zero_sum(
    N: int,
    k: float,
    zeros: ZeroSet,
    shift: float,
    divisors: Tuple[int, ...],
    denominator_offset: float = 1.0,
    pair_reduced: bool = False,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> ZeroSum:
    """
    Σ N^{k+e} Π Γ(ρᵢ/dᵢ) / Γ(k + denominator_offset + e) over ordered tuples of
    conjugate-expanded zeros. With pair_reduced=True the outer index runs over
    the upper half-plane only and 2·Re of that half is returned.
    """
    if N < 1:
        raise ConfigError(f"N must be >= 1, got {N}")
    order = len(divisors)
    log_N = math.log(N)
    k_offset = k + denominator_offset

    if order == 0:
        exponent = k + shift
        log_value = exponent * log_N - math.lgamma(k_offset + shift)
        if log_value > LOG_OVERFLOW_THRESHOLD:
            raise OverflowSentinelError(f"log-modulus {log_value:.1f} > {LOG_OVERFLOW_THRESHOLD}")
        value = math.exp(log_value)
        return ZeroSum(complex(value), value, 1)

    count = term_count(zeros.count, order, pair_reduced)
    budget = settings.TERM_BUDGET if term_budget is None else term_budget
    if count > budget:
        raise TermBudgetError(
            f"order-{order} zero sum needs {count} terms, budget is {budget}"
        )
    if zeros.count == 0:
        return ZeroSum(0j, 0.0, 0)

    expanded = expand_conjugates(zeros)
    args = [expanded / d for d in divisors]
    logs = [log_gamma_array(a) for a in args]

    # inner grid over factors 2..r, flattened row-major
    inner_args = np.zeros(1, dtype=np.complex128)
    inner_logs = np.zeros(1, dtype=np.complex128)
    for a, lg in zip(args[1:], logs[1:]):
        inner_args = (inner_args[:, None] + a[None, :]).ravel()
        inner_logs = (inner_logs[:, None] + lg[None, :]).ravel()

    outer = range(0, expanded.shape[0], 2) if pair_reduced else range(expanded.shape[0])
    outer = list(outer)
    width = max(1, settings.PARTITION_WIDTH)
    blocks = [outer[i : i + width] for i in range(0, len(outer), width)]
    base = complex(k + shift)

    def run(block: Sequence[int]) -> Tuple[complex, float]:
        return _row_sums(
            log_N, base, args[0], logs[0], inner_args, inner_logs, k_offset, block
        )

    workers = max(1, settings.THREADS if threads is None else threads)
    if workers == 1 or len(blocks) == 1:
        partials = [run(block) for block in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, blocks))

    value = complex(compensated_sum(np.array([p[0] for p in partials])))
    envelope = float(compensated_sum(np.array([p[1] for p in partials])))
    if pair_reduced:
        value = complex(2.0 * value.real, 0.0)
        envelope *= 2.0
    return ZeroSum(value, envelope, count)


class TermValue(NamedTuple):
    value: float
    imag_residue: float
    envelope: float
    terms: int


def evaluate_expansion(
    N: int,
    k: float,
    zeros: ZeroSet,
    expansion: Sequence[ExpansionTerm],
    pair_reduced: bool = False,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> TermValue:
    """coefficient-weighted sum of the zero sums named by an expansion table."""
    values: List[complex] = []
    envelope: List[float] = []
    terms = 0
    for entry in expansion:
        result = zero_sum(
            N,
            k,
            zeros,
            entry.shift,
            entry.divisors,
            entry.denominator_offset,
            pair_reduced=pair_reduced,
            term_budget=term_budget,
            threads=threads,
        )
        values.append(entry.coefficient * result.value)
        envelope.append(abs(entry.coefficient) * result.envelope)
        terms += result.terms
    total = complex(compensated_sum(np.array(values, dtype=np.complex128)))
    if not math.isfinite(total.real):
        raise OverflowSentinelError(f"explicit term overflowed at N={N}, k={k}")
    return TermValue(total.real, abs(total.imag), float(sum(envelope)), terms)


def m1(N: int, k: float) -> float:
    """(π/4) N^{k+2} / Γ(k+3), in log space."""
    if N < 1 or k < 0:
        raise ConfigError(f"m1 needs N >= 1 and k >= 0, got N={N}, k={k}")
    log_value = (k + 2.0) * math.log(N) + math.log(math.pi) - math.log(4.0) - math.lgamma(k + 3.0)
    if log_value > LOG_OVERFLOW_THRESHOLD:
        raise OverflowSentinelError(f"m1 log-modulus {log_value:.1f} > {LOG_OVERFLOW_THRESHOLD}")
    return math.exp(log_value)


def m2(
    N: int,
    k: float,
    zeros: ZeroSet,
    convention: FormulaConvention = FormulaConvention.DERIVED,
    pair_reduced: bool = False,
    threads: Optional[int] = None,
) -> float:
    return evaluate_expansion(
        N, k, zeros, M2_TERMS[convention], pair_reduced, threads=threads
    ).value


def m3(
    N: int,
    k: float,
    zeros: ZeroSet,
    pair_reduced: bool = False,
    threads: Optional[int] = None,
) -> float:
    return evaluate_expansion(N, k, zeros, M3_TERMS, pair_reduced, threads=threads).value


def m4(
    N: int,
    k: float,
    zeros: ZeroSet,
    convention: FormulaConvention = FormulaConvention.DERIVED,
    pair_reduced: bool = False,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> float:
    return evaluate_expansion(
        N, k, zeros, M4_TERMS[convention], pair_reduced, term_budget, threads
    ).value


def secondary_terms(
    N: int,
    k: float,
    zeros: ZeroSet,
    pair_reduced: bool = False,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> float:
    """Terms carried by the -log 2π constants of the two S~ expansions."""
    return evaluate_expansion(
        N, k, zeros, SECONDARY_TERMS, pair_reduced, term_budget, threads
    ).value


def term_bounds(
    N: int,
    k: float,
    zeros: ZeroSet,
    convention: FormulaConvention = FormulaConvention.DERIVED,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> Dict[str, float]:
    """Σ|summand| for M2, M3 and M4; each dominates the modulus of its term."""
    tables = {
        "m2": M2_TERMS[convention],
        "m3": M3_TERMS,
        "m4": M4_TERMS[convention],
    }
    return {
        name: evaluate_expansion(N, k, zeros, table, term_budget=term_budget, threads=threads).envelope
        for name, table in tables.items()
    }


def explicit_terms(
    N: int,
    k: float,
    zeros: ZeroSet,
    convention: FormulaConvention = FormulaConvention.DERIVED,
    pair_reduced: bool = False,
    secondary: bool = False,
    term_budget: Optional[int] = None,
    threads: Optional[int] = None,
) -> ExplicitTerms:
    """Evaluate M1..M4 (and optionally the secondary terms) for an already truncated set."""
    parts = {
        "m2": evaluate_expansion(N, k, zeros, M2_TERMS[convention], pair_reduced, term_budget, threads),
        "m3": evaluate_expansion(N, k, zeros, M3_TERMS, pair_reduced, term_budget, threads),
        "m4": evaluate_expansion(N, k, zeros, M4_TERMS[convention], pair_reduced, term_budget, threads),
    }
    extra = None
    if secondary:
        extra = secondary_terms(N, k, zeros, pair_reduced, term_budget, threads)

    logger.info(
        f"Explicit terms N={N} k={k} zeros={zeros.count} convention={convention.value}"
    )
    return ExplicitTerms(
        m1=m1(N, k),
        m2=parts["m2"].value,
        m3=parts["m3"].value,
        m4=parts["m4"].value,
        T=zeros.height,
        zeros_used=zeros.count,
        imag_residue=max(p.imag_residue for p in parts.values()),
        term_counts={
            "single": term_count(zeros.count, 1, pair_reduced),
            "double": term_count(zeros.count, 2, pair_reduced),
            "triple": term_count(zeros.count, 3, pair_reduced),
        },
        convention=convention,
        pair_reduced=pair_reduced,
        secondary=extra,
    )
