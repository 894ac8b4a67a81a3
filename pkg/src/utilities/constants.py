import math
from typing import List, Tuple

LAMBDA_CACHE_MAGIC: bytes = b"LAMBDAv1"
LAMBDA_CACHE_NAME = "lambda_{}.bin"

# Lanczos approximation, g = 7, nine coefficients
LANCZOS_G: float = 7.0
LANCZOS_COEFFICIENTS: Tuple[float, ...] = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

LOG_PI = math.log(math.pi)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# exp() overflows near 709.78; leave headroom for later products
LOG_OVERFLOW_THRESHOLD = 700.0
LOG_UNDERFLOW_THRESHOLD = -745.0

# float64 headroom for the binomial expansion of (M - m)^k
MAX_BINOMIAL_K = 12

# the explicit formula is only claimed for k > 3/2
CRITICAL_K = 1.5
CRITICAL_K_WARNING = "k ≤ 3/2: outside Theorem range"
EMPTY_ZEROS_WARNING = "no zeros supplied: M2, M3, M4 evaluate to 0"
PRINTED_CONVENTION_WARNING = "printed convention: M2 and M4 signs and M4 denominator as displayed"

# -zeta'/zeta(0) = -log(2 pi), the constant in every S~_l expansion
ZETA_CONSTANT = -math.log(2.0 * math.pi)

# S~_l summation stops once log(m) exp(-m^l a) drops below 1e-30
STILDE_TAIL_LOG = 30.0 * math.log(10.0)

FLOAT_SIGNIFICANT_DIGITS = 17

REPORT_FIELDS: List[str] = [
    "N",
    "k",
    "T",
    "zeros_used",
    "lhs",
    "m1",
    "m2",
    "m3",
    "m4",
    "residual",
    "normalized_residual",
    "imag_residue",
    "warnings",
]
SCAN_COLUMNS: List[str] = [
    "N",
    "k",
    "T",
    "lhs",
    "m1",
    "m2",
    "m3",
    "m4",
    "residual",
    "normalized_residual",
]
RSP_CSV_HEADER: List[str] = ["n", "rsp"]

# sieve working set per index: int32 spf + float64 weight + int32 prime slot
SIEVE_BYTES_PER_ENTRY = 16

SQRT_PI = math.sqrt(math.pi)
