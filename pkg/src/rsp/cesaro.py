import logging
import math
from typing import Tuple

import numpy as np

from config import settings
from models import CesaroParams, LambdaTable, Method, SquareSupport
from rsp.kernels import binomial_pair_sums, direct_pair_sums
from rsp.representation import rsp_bruteforce
from sieve.lambda_table import weighted_power_prefix
from utilities.constants import LOG_OVERFLOW_THRESHOLD
from utilities.exceptions import CapacityError, OverflowSentinelError
from utilities.utils import compensated_sum, neumaier_sum

logger = logging.getLogger(__name__)


def _square_pairs(support: SquareSupport, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Ordered pairs (m2, m3), row-major, with M = N - m2² - m3² >= 2."""
    sums = np.add.outer(support.msq, support.msq).ravel()
    pair_weights = np.multiply.outer(support.weight, support.weight).ravel()
    keep = sums <= N - 2
    remainders = (N - sums[keep]).astype(np.int64)
    return remainders, np.ascontiguousarray(pair_weights[keep])


def _power_table(N: int, k: float) -> np.ndarray:
    """powk[j] = j^k with 0^0 = 1; non-integer k goes through exp(k log j)."""
    if float(k).is_integer():
        return np.arange(N + 1, dtype=np.float64) ** k
    powk = np.zeros(N + 1)
    powk[1:] = np.exp(k * np.log(np.arange(1, N + 1, dtype=np.float64)))
    return powk


def _divide_by_gamma(total: float, k: float) -> float:
    if total == 0.0:
        return 0.0
    value = math.copysign(math.exp(math.log(abs(total)) - math.lgamma(k + 1.0)), total)
    if not math.isfinite(value):
        raise OverflowSentinelError(f"Cesàro sum left float64 range at k={k}")
    return value


def _lhs_direct(N: int, k: float, table: LambdaTable, support: SquareSupport) -> float:
    remainders, pair_weights = _square_pairs(support, N)
    if remainders.size == 0:
        return 0.0
    partials = direct_pair_sums(
        remainders, pair_weights, table.prime_powers, table.weights, _power_table(N, k)
    )
    return float(neumaier_sum(partials))


def _lhs_binomial(N: int, k: int, table: LambdaTable, support: SquareSupport) -> float:
    remainders, pair_weights = _square_pairs(support, N)
    if remainders.size == 0:
        return 0.0
    prefixes = np.stack([weighted_power_prefix(table, j) for j in range(k + 1)])
    coefficients = np.array(
        [math.comb(k, j) * (-1.0) ** j for j in range(k + 1)], dtype=np.float64
    )
    partials = binomial_pair_sums(remainders, pair_weights, prefixes, coefficients)
    return float(neumaier_sum(partials))


def _lhs_bruteforce(N: int, k: float) -> float:
    if N > settings.BRUTEFORCE_LIMIT:
        raise CapacityError(
            f"bruteforce LHS is limited to N <= {settings.BRUTEFORCE_LIMIT}, got {N}"
        )
    terms = [rsp_bruteforce(n) * float(N - n) ** k for n in range(10, N + 1)]
    if not terms:
        return 0.0
    return float(compensated_sum(terms))


def cesaro_lhs(params: CesaroParams, table: LambdaTable, support: SquareSupport) -> float:
    """Σ_{n <= N} r_SP(n) (N - n)^k / Γ(k + 1)."""
    N, k = params.N, params.k
    if k * math.log(N) > LOG_OVERFLOW_THRESHOLD:
        raise OverflowSentinelError(f"N^k leaves float64 range (k log N = {k * math.log(N):.1f})")

    if params.method == Method.BRUTEFORCE:
        total = _lhs_bruteforce(N, k)
    else:
        if table.limit < N:
            raise CapacityError(f"Λ table stops at {table.limit}, need {N}")
        if support.limit < N:
            raise CapacityError(f"square support stops at {support.limit}, need {N}")
        if params.method == Method.BINOMIAL:
            total = _lhs_binomial(N, int(k), table, support)
        else:
            total = _lhs_direct(N, k, table, support)

    logger.debug(f"Cesàro LHS N={N} k={k} method={params.method.value}")
    return _divide_by_gamma(total, k)
