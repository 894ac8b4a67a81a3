"""
Complex log-gamma in log space.

Lanczos (g = 7, nine coefficients) on Re z >= 1/2, reflection below that, and
conjugate symmetry so that only the closed upper half-plane is ever evaluated.
The imaginary part is the principal value of that expression, not a continuous
branch: callers only exponentiate sums and differences of log-gammas, where
multiples of 2πi drop out.
"""

import logging
import math
from typing import Iterable

import numpy as np

from models import GammaRatio, LogGammaValue
from utilities.constants import (
    HALF_LOG_TWO_PI,
    LANCZOS_COEFFICIENTS,
    LANCZOS_G,
    LOG_OVERFLOW_THRESHOLD,
    LOG_PI,
    LOG_UNDERFLOW_THRESHOLD,
)
from utilities.exceptions import ConfigError, OverflowSentinelError, PoleError

logger = logging.getLogger(__name__)


def _lanczos(z: np.ndarray) -> np.ndarray:
    z = z - 1.0
    x = np.full(z.shape, LANCZOS_COEFFICIENTS[0], dtype=np.complex128)
    for i, c in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        x = x + c / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _log_sin_pi(w: np.ndarray) -> np.ndarray:
    # Im w >= 0 keeps |exp(2πiw)| <= 1
    e = np.exp(2j * np.pi * w)
    return -1j * np.pi * w + np.log((e - 1.0) / 2j)


def _check_poles(z: np.ndarray) -> None:
    real_axis = z.imag == 0.0
    poles = real_axis & (z.real <= 0.0) & (z.real == np.round(z.real))
    if np.any(poles):
        raise PoleError(f"Γ has a pole at {z[poles][0].real:g}")


def log_gamma_array(z: Iterable[complex]) -> np.ndarray:
    """Elementwise log Γ for a complex array."""
    z = np.asarray(z, dtype=np.complex128)
    flat = z.ravel()
    _check_poles(flat)

    lower = flat.imag < 0.0
    w = np.where(lower, np.conj(flat), flat)
    out = np.empty_like(w)

    reflect = w.real < 0.5
    out[~reflect] = _lanczos(w[~reflect])
    if np.any(reflect):
        r = w[reflect]
        out[reflect] = LOG_PI - _log_sin_pi(r) - _lanczos(1.0 - r)

    # real arguments: arg is 0 or π depending on the sign of Γ
    real_axis = w.imag == 0.0
    if np.any(real_axis):
        x = w.real[real_axis]
        negative = (x < 0.0) & (np.floor(x) % 2 == 1)
        out[real_axis] = out[real_axis].real + 1j * np.where(negative, np.pi, 0.0)

    out = np.where(lower, np.conj(out), out)
    return out.reshape(z.shape)


def log_gamma(z: complex) -> LogGammaValue:
    """
    log Γ(z) as (logmod, arg). A logmod above the overflow threshold is
    returned flagged, not raised; see LogGammaValue.overflow.
    """
    value = complex(log_gamma_array(np.array([z]))[0])
    result = LogGammaValue(logmod=value.real, arg=value.imag)
    if result.overflow:
        logger.debug(f"log Γ({z}) = {value.real:.1f} exceeds the overflow threshold")
    return result


def gamma_ratio(numerators: Iterable[complex], denominator: complex) -> GammaRatio:
    """Π Γ(numerators) / Γ(denominator), exponentiated once from log space."""
    logs = log_gamma_array(np.asarray(list(numerators), dtype=np.complex128))
    log_value = complex(logs.sum() - log_gamma_array(np.array([denominator]))[0])
    if log_value.real > LOG_OVERFLOW_THRESHOLD:
        raise OverflowSentinelError(
            f"Γ ratio has log-modulus {log_value.real:.1f} > {LOG_OVERFLOW_THRESHOLD}"
        )
    if log_value.real < LOG_UNDERFLOW_THRESHOLD:
        return GammaRatio(value=0j, log_modulus=log_value.real, underflow=True)
    return GammaRatio(value=complex(np.exp(log_value)), log_modulus=log_value.real)


def log_stirling_magnitude(x: float, y: float) -> float:
    if y == 0.0:
        raise ConfigError("Stirling magnitude needs y != 0")
    ay = abs(y)
    return HALF_LOG_TWO_PI - math.pi * ay / 2.0 + (x - 0.5) * math.log(ay)


def stirling_magnitude(x: float, y: float) -> float:
    """√(2π) e^{-π|y|/2} |y|^{x-1/2}, the large-|y| model of |Γ(x + iy)|."""
    return math.exp(log_stirling_magnitude(x, y))
