"""
Numerical checks of the identities behind the explicit formula:
the Laplace line integral for 1/Γ(s), the sums S~_ℓ(z) = Σ Λ(m) e^{-m^ℓ z}
against their zero expansions, and the generating-function identity
S~_1(z) S~_2(z)² = Σ r_SP(n) e^{-nz}.
"""

import logging
import math
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from analytic.gamma import log_gamma_array
from config import settings
from models import LambdaTable, LineQuadratureSpec, StildeValue, ZeroSet
from rsp.representation import rsp_table
from sieve.lambda_table import square_support
from utilities.constants import STILDE_TAIL_LOG
from utilities.exceptions import CapacityError, ConfigError
from utilities.utils import compensated_sum
from zeros.table import expand_conjugates, truncate

logger = logging.getLogger(__name__)

_MAX_TAIL_TERMS = 60


def _tail_series(s: complex, v: complex) -> complex:
    """Σ_j (s)_j v^{-s-j}, the asymptotic expansion of ∫_v^∞ e^u u^{-s} du / e^v."""
    term = complex(np.exp(-s * np.log(v)))
    total = term
    for j in range(_MAX_TAIL_TERMS):
        nxt = term * (s + j) / v
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total):
            break
        term = nxt
        total += term
    return total


def laplace_quadrature(s: complex, spec: Optional[LineQuadratureSpec] = None) -> complex:
    """
    (1/2πi) ∫ e^v v^{-s} dv along v = a + it, which equals 1/Γ(s) for Re s > 0.

    Trapezoid rule on |t| <= height with the h² endpoint correction; both
    tails beyond ±height are added from their asymptotic series.
    """
    s = complex(s)
    if s.real <= 0.0:
        raise ConfigError(f"Laplace integral needs Re s > 0, got {s}")
    spec = spec or LineQuadratureSpec.default_for(s)
    nodes = spec.node_count
    if nodes > settings.QUADRATURE_NODE_BUDGET:
        raise CapacityError(
            f"quadrature needs {nodes} nodes, budget is {settings.QUADRATURE_NODE_BUDGET}"
        )

    a, H = spec.a, spec.height
    t = np.linspace(-H, H, nodes)
    h = 2.0 * H / (nodes - 1)
    v = a + 1j * t
    f = np.exp(v - s * np.log(v)) / (2.0 * math.pi)

    interior = complex(compensated_sum(f)) - 0.5 * (f[0] + f[-1])
    trapezoid = h * interior

    # d/dt of e^v v^{-s} is i e^v v^{-s} (1 - s/v)
    df_lo = 1j * f[0] * (1.0 - s / v[0])
    df_hi = 1j * f[-1] * (1.0 - s / v[-1])
    endpoint = -(h * h / 12.0) * (df_hi - df_lo)

    v_hi, v_lo = complex(a, H), complex(a, -H)
    scale = math.exp(a) / (2.0 * math.pi)
    tails = scale * (
        1j * np.exp(1j * H) * _tail_series(s, v_hi)
        - 1j * np.exp(-1j * H) * _tail_series(s, v_lo)
    )
    return complex(trapezoid + endpoint + tails)


def stilde_cutoff(ell: int, a: float, limit: int) -> int:
    """Smallest M with log(m) e^{-m^ℓ a} below 1e-30 for every m > M."""
    bound = (STILDE_TAIL_LOG + math.log(math.log(limit) + 1.0)) / a
    return math.ceil(bound ** (1.0 / ell))


def s_tilde(ell: int, z: complex, table: LambdaTable) -> StildeValue:
    """Σ Λ(m) e^{-m^ℓ z} summed directly over the prime powers of the table."""
    z = complex(z)
    if ell < 1:
        raise ConfigError(f"ell must be a positive integer, got {ell}")
    if z.real <= 0.0:
        raise ConfigError(f"S~ needs Re z > 0, got {z}")
    a = z.real
    M = stilde_cutoff(ell, a, max(table.limit, 2))
    if M > table.limit:
        raise CapacityError(
            f"S~_{ell}({z}) needs Λ up to {M}, table stops at {table.limit}"
        )

    powers = table.prime_powers
    m = powers[powers <= M]
    terms = table.weights[m] * np.exp(-(m.astype(np.float64) ** ell) * z)
    value = complex(compensated_sum(terms)) if m.size else 0j

    nxt = float(M + 1)
    q = math.exp(-ell * nxt ** (ell - 1) * a)
    tail_bound = 2.0 * math.log(nxt) * math.exp(-(nxt**ell) * a) / (1.0 - q)
    return StildeValue(ell=ell, z=z, value=value, terms_used=int(m.size), tail_bound=tail_bound)


def stilde_main_term(ell: int, z: complex) -> complex:
    """Γ(1/ℓ) / (ℓ z^{1/ℓ})."""
    lg = complex(log_gamma_array(np.array([1.0 / ell]))[0])
    return complex(np.exp(lg - math.log(ell) - np.log(complex(z)) / ell))


def stilde_zero_sum(ell: int, z: complex, zeros: ZeroSet) -> complex:
    """Σ z^{-ρ/ℓ} Γ(ρ/ℓ) over conjugate-expanded zeros."""
    if zeros.count == 0:
        return 0j
    w = expand_conjugates(zeros) / ell
    terms = np.exp(-w * np.log(complex(z)) + log_gamma_array(w))
    return complex(compensated_sum(terms))


def lemma_residual(
    ell: int,
    z: complex,
    table: LambdaTable,
    zeros: ZeroSet,
    T: Optional[float] = None,
) -> float:
    """|S~_ℓ(z) - Γ(1/ℓ)/(ℓ z^{1/ℓ}) + (1/ℓ) Σ_ρ z^{-ρ/ℓ} Γ(ρ/ℓ)| with zeros up to height T."""
    if ell not in (1, 2):
        raise ConfigError(f"lemma residual is defined for ell in (1, 2), got {ell}")
    if T is not None:
        zeros = truncate(zeros, T)
    value = s_tilde(ell, z, table).value
    residual = value - stilde_main_term(ell, z) + stilde_zero_sum(ell, z, zeros) / ell
    return abs(residual)


def power_modulus(z: complex, w: complex) -> float:
    """|z^{-w}| = |z|^{-Re w} exp(Im w · arctan(y/a)) for Re z > 0."""
    z, w = complex(z), complex(w)
    if z.real <= 0.0:
        raise ConfigError(f"power_modulus needs Re z > 0, got {z}")
    return math.exp(-w.real * math.log(abs(z)) + w.imag * math.atan(z.imag / z.real))


def error_shape(z: complex) -> float:
    """|z|^{1/2}, times 1 + log²(|y|/a) once |y| > a."""
    z = complex(z)
    a, y = z.real, abs(z.imag)
    shape = math.sqrt(abs(z))
    if y > a:
        shape *= 1.0 + math.log(y / a) ** 2
    return shape


class ErrorFit(NamedTuple):
    constants: List[float]
    fitted: float
    spread: float


def fit_error_constants(zs: Sequence[complex], residuals: Sequence[float]) -> ErrorFit:
    """Per-point residual / error_shape; the fitted constant is their maximum."""
    if len(zs) != len(residuals) or not zs:
        raise ConfigError("need matching, non-empty z and residual sequences")
    constants = [r / error_shape(z) for z, r in zip(zs, residuals)]
    low, high = min(constants), max(constants)
    spread = high / low if low > 0.0 else math.inf
    return ErrorFit(constants=constants, fitted=high, spread=spread)


class GeneratingCheck(NamedTuple):
    series: complex
    product: complex
    tail_bound: float
    relative_gap: float


def generating_function_check(table: LambdaTable, z: complex, limit: int) -> GeneratingCheck:
    """Σ_{n <= limit} r_SP(n) e^{-nz} against S~_1(z) S~_2(z)²."""
    z = complex(z)
    support = square_support(table, limit)
    values = rsp_table(table, support, limit).values
    n = np.arange(limit + 1, dtype=np.float64)
    series = complex(compensated_sum(values * np.exp(-n * z)))

    s1 = s_tilde(1, z, table)
    s2 = s_tilde(2, z, table)
    product = s1.value * s2.value**2

    # r_SP(n) <= n log³ n bounds the series tail; the S~ tails enter linearly
    a = z.real
    nxt = float(limit + 1)
    series_tail = nxt * math.log(nxt) ** 3 * math.exp(-nxt * a) / (1.0 - math.exp(-a)) ** 2
    product_tail = s1.tail_bound * abs(s2.value) ** 2 + 2.0 * abs(s1.value * s2.value) * s2.tail_bound
    gap = abs(series - product) / abs(product) if product != 0 else math.inf
    logger.debug(f"Generating identity at z={z}: relative gap {gap:.3g}")
    return GeneratingCheck(
        series=series,
        product=product,
        tail_bound=series_tail + product_tail,
        relative_gap=gap,
    )
