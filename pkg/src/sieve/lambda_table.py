import logging
import math
from typing import Tuple

import numpy as np
from numba import njit

from config import settings
from models import LambdaTable, SquareSupport
from utilities.constants import SIEVE_BYTES_PER_ENTRY
from utilities.exceptions import CapacityError, ConfigError
from utilities.utils import neumaier_cumsum

logger = logging.getLogger(__name__)


@njit(cache=True)
def _smallest_prime_factors(limit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Linear sieve: every composite is crossed out once, by its smallest prime factor."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    primes = np.empty(limit // 2 + 2, dtype=np.int32)
    count = 0
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
        for j in range(count):
            p = primes[j]
            if p > spf[i] or i * p > limit:
                break
            spf[i * p] = p
    return spf, primes[:count]


@njit(cache=True)
def _mark_prime_powers(limit: int, primes: np.ndarray, logs: np.ndarray) -> np.ndarray:
    weights = np.zeros(limit + 1)
    for j in range(primes.shape[0]):
        p = np.int64(primes[j])
        q = p
        while q <= limit:
            weights[q] = logs[j]
            q *= p
    return weights


def sieve_memory_estimate(limit: int) -> int:
    return (limit + 1) * SIEVE_BYTES_PER_ENTRY


def build_lambda_table(limit: int) -> LambdaTable:
    """
    Sieve Λ(n) for 0 <= n <= limit.

    log p is taken with math.log once per prime, so the stored weights are
    bit-identical to any trial-division oracle that also uses math.log.
    """
    if limit < 1:
        raise ConfigError(f"sieve limit must be >= 1, got {limit}")
    estimate = sieve_memory_estimate(limit)
    if estimate > settings.SIEVE_MEMORY_BUDGET_BYTES or limit >= np.iinfo(np.int32).max:
        raise CapacityError(
            f"sieve to {limit} needs ~{estimate} bytes, "
            f"budget is {settings.SIEVE_MEMORY_BUDGET_BYTES}"
        )

    _, primes = _smallest_prime_factors(limit)
    logs = np.array([math.log(int(p)) for p in primes], dtype=np.float64)
    weights = _mark_prime_powers(limit, primes, logs)
    logger.info(f"Sieved Λ up to {limit}: {primes.shape[0]} primes")
    return LambdaTable(limit=limit, weights=weights)


def square_support(table: LambdaTable, limit: int) -> SquareSupport:
    """Prime powers m with m² <= limit, with their weights."""
    if limit < 1:
        raise ConfigError(f"square limit must be >= 1, got {limit}")
    root = math.isqrt(limit)
    if root > table.limit:
        raise CapacityError(
            f"squares up to {limit} need Λ up to {root}, table stops at {table.limit}"
        )
    powers = table.prime_powers
    m = powers[powers <= root]
    return SquareSupport(limit=limit, m=m, msq=m * m, weight=table.weights[m])


def weighted_power_prefix(table: LambdaTable, j: int) -> np.ndarray:
    """output[M] = Σ_{m <= M} Λ(m) m^j, accumulated with compensation."""
    if j < 0 or j > settings.MAX_POWER_EXPONENT:
        raise ConfigError(
            f"power exponent must lie in [0, {settings.MAX_POWER_EXPONENT}], got {j}"
        )
    n = np.arange(table.limit + 1, dtype=np.float64)
    prefix = neumaier_cumsum(table.weights * n**j)
    prefix.setflags(write=False)
    return prefix
