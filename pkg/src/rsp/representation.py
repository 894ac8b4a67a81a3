import csv
import logging
import math
from functools import lru_cache
from pathlib import Path
from typing import List, TextIO, Union

from models import LambdaTable, RspTable, SquareSupport
from rsp.kernels import scatter_square_pairs
from utilities.constants import RSP_CSV_HEADER
from utilities.exceptions import CapacityError, ConfigError
from utilities.utils import compensated_sum, format_float

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def trial_division_lambda(n: int) -> float:
    """Λ(n) by trial division, independent of the sieve."""
    if n < 2:
        return 0.0
    p = 2
    while p * p <= n:
        if n % p == 0:
            rest = n
            while rest % p == 0:
                rest //= p
            return math.log(p) if rest == 1 else 0.0
        p += 1
    return math.log(n)


@lru_cache(maxsize=None)
def rsp_bruteforce(n: int) -> float:
    """Enumerate every ordered (m1, m2, m3) with m1 + m2² + m3² = n."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    terms: List[float] = []
    m2 = 1
    while m2 * m2 < n:
        w2 = trial_division_lambda(m2)
        if w2:
            m3 = 1
            while m2 * m2 + m3 * m3 < n:
                w3 = trial_division_lambda(m3)
                if w3:
                    w1 = trial_division_lambda(n - m2 * m2 - m3 * m3)
                    if w1:
                        terms.append(w1 * w2 * w3)
                m3 += 1
        m2 += 1
    if not terms:
        return 0.0
    return float(compensated_sum(terms))


def rsp_table(
    table: LambdaTable,
    support: SquareSupport,
    limit: int,
    symmetric: bool = False,
) -> RspTable:
    """
    r_SP(n) for n <= limit by scattering Λ(m2)Λ(m3)Λ(n - m2² - m3²) over square pairs.
    With symmetric=True only pairs m2 <= m3 are visited and off-diagonal pairs count twice.
    """
    if limit < 1:
        raise ConfigError(f"limit must be >= 1, got {limit}")
    if table.limit < limit:
        raise CapacityError(f"Λ table stops at {table.limit}, need {limit}")
    if support.limit < limit:
        raise CapacityError(f"square support stops at {support.limit}, need {limit}")

    values = scatter_square_pairs(
        limit,
        table.weights,
        table.prime_powers,
        support.msq,
        support.weight,
        symmetric,
    )
    logger.debug(f"Scattered {support.count} square entries up to {limit}")
    return RspTable(limit=limit, values=values)


def write_rsp_csv(rsp: RspTable, target: Union[Path, TextIO]) -> None:
    """Header "n,rsp", then one row for each 1 <= n <= limit."""
    if isinstance(target, (str, Path)):
        try:
            with open(target, "w", newline="", encoding="utf-8") as f:
                write_rsp_csv(rsp, f)
        except OSError as e:
            raise OSError(f"cannot write {target}: {e}") from e
        return

    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(RSP_CSV_HEADER)
    for n in range(1, rsp.limit + 1):
        writer.writerow([n, format_float(rsp.values[n])])
