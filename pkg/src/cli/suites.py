import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from analytic.gamma import log_gamma, log_gamma_array, stirling_magnitude
from analytic.laplace import (
    fit_error_constants,
    generating_function_check,
    laplace_quadrature,
    lemma_residual,
    s_tilde,
)
from cli.schemas import Check
from config import settings
from models import LambdaTable, VerifySuite, ZeroSet
from sieve.cache import load_or_build
from utilities.constants import SQRT_PI
from utilities.exceptions import ConfigError, UnknownSuiteError
from zeros.table import load_zeros

logger = logging.getLogger(__name__)

SAMPLE_SEED = 20240601
SAMPLE_SIZE = 200
LEMMA_Z = 1e-3
LEMMA_HEIGHTS = (50.0, 200.0, 500.0)
LEMMA_Y_GRID = tuple(float(y) for y in np.geomspace(1e-4, 2e-2, 10))


class SuiteContext:
    """Inputs a suite may need, loaded on first use"""

    def __init__(self, cache_dir: Path, zeros_path: Optional[Path] = None):
        self.cache_dir = cache_dir
        self.zeros_path = zeros_path
        self._table: Optional[LambdaTable] = None
        self._zeros: Optional[ZeroSet] = None

    @property
    def table(self) -> LambdaTable:
        if self._table is None:
            self._table, _, _ = load_or_build(settings.VERIFY_TABLE_LIMIT, self.cache_dir)
        return self._table

    @property
    def zeros(self) -> ZeroSet:
        if self._zeros is None:
            if self.zeros_path is None:
                raise ConfigError("this suite needs a zero table (--zeros)")
            self._zeros = load_zeros(self.zeros_path)
        return self._zeros


def _within(name: str, measured: float, reference: float, tolerance: float) -> Check:
    return Check(
        name=name,
        measured=measured,
        reference=reference,
        tolerance=tolerance,
        passed=abs(measured - reference) <= tolerance,
    )


def _info(name: str, measured: float) -> Check:
    return Check(name=name, measured=measured, passed=True)


def _inverse_gamma(s: complex) -> complex:
    return complex(np.exp(-log_gamma(s).to_complex()))


def laplace_suite(ctx: SuiteContext) -> List[Check]:
    checks = []
    for label, s in (("1/2", 0.5), ("1", 1.0), ("2", 2.0), ("3+i", 3 + 1j)):
        error = abs(laplace_quadrature(s) - _inverse_gamma(s))
        checks.append(_within(f"laplace.s={label}", error, 0.0, 1e-6))
    return checks


def stirling_suite(ctx: SuiteContext) -> List[Check]:
    checks = []
    for x in (0.1, 0.5, 0.9):
        ratio = math.exp(log_gamma(complex(x, 40.0)).logmod) / stirling_magnitude(x, 40.0)
        checks.append(_within(f"stirling.x={x}.y=40", ratio, 1.0, 1e-2))
    upper = math.exp(log_gamma(complex(0.7, 40.0)).logmod) / stirling_magnitude(0.7, 40.0)
    lower = math.exp(log_gamma(complex(0.7, -40.0)).logmod) / stirling_magnitude(0.7, -40.0)
    checks.append(_within("stirling.conjugate", lower, upper, 1e-10))
    return checks


def gamma_suite(ctx: SuiteContext) -> List[Check]:
    rng = np.random.default_rng(SAMPLE_SEED)
    checks = [
        _within("gamma.half", log_gamma(0.5).logmod, 0.5 * math.log(math.pi), 1e-12),
        _within("gamma.five", log_gamma(5.0).logmod, math.log(24.0), 1e-12),
    ]

    z = rng.uniform(0.0, 10.0, SAMPLE_SIZE) + 1j * rng.uniform(-100.0, 100.0, SAMPLE_SIZE)
    ratio = np.exp(log_gamma_array(z + 1.0) - log_gamma_array(z)) / z
    checks.append(_within("gamma.recurrence", float(np.max(np.abs(ratio - 1.0))), 0.0, 1e-10))

    w = rng.uniform(0.01, 0.99, SAMPLE_SIZE) + 1j * rng.uniform(-50.0, 50.0, SAMPLE_SIZE)
    product = np.exp(
        log_gamma_array(w) + log_gamma_array(1.0 - w) + np.log(np.sin(np.pi * w)) - math.log(math.pi)
    )
    checks.append(_within("gamma.reflection", float(np.max(np.abs(product - 1.0))), 0.0, 1e-9))

    lg = log_gamma_array(z)
    lg_conj = log_gamma_array(np.conj(z))
    checks.append(
        _within("gamma.conjugate", float(np.max(np.abs(lg_conj - np.conj(lg)))), 0.0, 1e-12)
    )
    return checks


def pnt_suite(ctx: SuiteContext) -> List[Check]:
    a1, a2 = 1e-3, 1e-4
    s1 = s_tilde(1, a1, ctx.table).value.real
    s2 = s_tilde(2, a2, ctx.table).value.real
    return [
        _within("pnt.stilde1", a1 * s1, 1.0, 0.05),
        _within("pnt.stilde2", 2.0 * math.sqrt(a2) * s2 / SQRT_PI, 1.0, 0.05),
    ]


def _height_checks(ell: int, ctx: SuiteContext) -> List[Check]:
    residuals = [lemma_residual(ell, LEMMA_Z, ctx.table, ctx.zeros, T) for T in LEMMA_HEIGHTS]
    checks = [_info(f"lemma{ell + 1}.residual.T={T:g}", r) for T, r in zip(LEMMA_HEIGHTS, residuals)]
    rise = max(b - a for a, b in zip(residuals, residuals[1:]))
    checks.append(
        Check(
            name=f"lemma{ell + 1}.monotone_in_T",
            measured=rise,
            reference=0.0,
            tolerance=1e-12,
            passed=rise <= 1e-12,
        )
    )
    return checks


def _grid_residuals(ell: int, ctx: SuiteContext) -> List[float]:
    T = LEMMA_HEIGHTS[-1]
    return [
        lemma_residual(ell, complex(LEMMA_Z, y), ctx.table, ctx.zeros, T) for y in LEMMA_Y_GRID
    ]


def lemma2_suite(ctx: SuiteContext) -> List[Check]:
    checks = _height_checks(1, ctx)
    zs = [complex(LEMMA_Z, y) for y in LEMMA_Y_GRID]
    fit = fit_error_constants(zs, _grid_residuals(1, ctx))
    checks.append(_info("lemma2.fitted_constant", fit.fitted))
    if math.isfinite(fit.spread):
        checks.append(_info("lemma2.constant_spread", fit.spread))
    return checks


def lemma3_suite(ctx: SuiteContext) -> List[Check]:
    checks = _height_checks(2, ctx)
    first = _grid_residuals(1, ctx)
    second = _grid_residuals(2, ctx)
    ratios = [b / a for a, b in zip(first, second) if a > 0.0]
    worst = max(max(ratios), 1.0 / min(ratios)) if ratios else math.inf
    checks.append(
        Check(
            name="lemma3.band_vs_lemma2",
            measured=worst if math.isfinite(worst) else 0.0,
            reference=1.0,
            tolerance=10.0,
            passed=math.isfinite(worst) and worst <= 10.0,
        )
    )
    return checks


def generating_suite(ctx: SuiteContext) -> List[Check]:
    result = generating_function_check(ctx.table, 1.0 / 50.0, 5000)
    return [
        _within("generating.relative_gap", result.relative_gap, 0.0, 1e-8),
        _info("generating.tail_bound", result.tail_bound),
    ]


SUITES: Dict[VerifySuite, Callable[[SuiteContext], List[Check]]] = {
    VerifySuite.LAPLACE: laplace_suite,
    VerifySuite.STIRLING: stirling_suite,
    VerifySuite.LEMMA2: lemma2_suite,
    VerifySuite.LEMMA3: lemma3_suite,
    VerifySuite.GAMMA: gamma_suite,
    VerifySuite.PNT: pnt_suite,
    VerifySuite.GENERATING: generating_suite,
}


def run_suite(name: str, ctx: SuiteContext) -> List[Check]:
    try:
        suite = VerifySuite(name)
    except ValueError:
        known = ", ".join(s.value for s in VerifySuite)
        raise UnknownSuiteError(f"unknown suite {name!r}; known suites: {known}") from None
    checks = SUITES[suite](ctx)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.warning(f"Suite {name}: {len(failed)} failing checks: {', '.join(failed)}")
    else:
        logger.info(f"✅ Suite {name}: {len(checks)} checks passed")
    return checks
