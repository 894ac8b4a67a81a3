import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from models import ZeroSet
from utilities.exceptions import BetaRangeError, ConfigError, OrderingError, ParseError
from utilities.utils import format_float

logger = logging.getLogger(__name__)


def _parse_field(text: str, lineno: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cannot parse {what} {text!r}", line=lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"{what} must be finite, got {text!r}", line=lineno)
    return value


def load_zeros(path: Path) -> ZeroSet:
    """
    Read a zero table: one zero per line, either "γ" or "β γ".
    Blank lines and lines starting with '#' are skipped.
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read zero table {path}: {e}") from e
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(
            f"byte {data[e.start]:#04x} is not valid UTF-8", line=data.count(b"\n", 0, e.start) + 1
        ) from None

    gammas: List[float] = []
    betas: List[float] = []
    explicit_beta = False
    previous: Optional[float] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) == 1:
            beta = 0.5
            gamma = _parse_field(fields[0], lineno, "ordinate")
        elif len(fields) == 2:
            beta = _parse_field(fields[0], lineno, "real part")
            gamma = _parse_field(fields[1], lineno, "ordinate")
            explicit_beta = True
        else:
            raise ParseError(f"expected 1 or 2 fields, got {len(fields)}", line=lineno)

        if gamma <= 0.0:
            raise ParseError(f"ordinate must be positive, got {gamma}", line=lineno)
        if not 0.0 < beta < 1.0:
            raise BetaRangeError(f"real part {beta} outside (0, 1)", line=lineno)
        if previous is not None and gamma <= previous:
            raise OrderingError(
                f"ordinate {gamma} does not exceed the previous {previous}", line=lineno
            )
        previous = gamma
        gammas.append(gamma)
        betas.append(beta)

    zeros = ZeroSet(
        gammas=np.array(gammas, dtype=np.float64),
        betas=np.array(betas, dtype=np.float64) if explicit_beta else None,
        source=str(path),
    )
    logger.info(f"Loaded {zeros.count} zeros from {path}")
    return zeros


def dump_zeros(zeros: ZeroSet, path: Path) -> Path:
    """Write zeros in the format load_zeros reads, 17 significant digits per field."""
    path = Path(path)
    lines = [f"# {zeros.source}"] if zeros.source else []
    if zeros.betas is None:
        lines.extend(format_float(g) for g in zeros.gammas)
    else:
        lines.extend(
            f"{format_float(b)} {format_float(g)}" for b, g in zip(zeros.betas, zeros.gammas)
        )
    try:
        path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot write zero table {path}: {e}") from e
    return path


def truncate(zeros: ZeroSet, T: float) -> ZeroSet:
    """Zeros with γ <= T; an infinite T keeps everything."""
    if math.isnan(T) or T <= 0.0:
        raise ConfigError(f"truncation height must be positive, got {T}")
    count = int(np.searchsorted(zeros.gammas, T, side="right"))
    return ZeroSet(
        gammas=zeros.gammas[:count],
        betas=None if zeros.betas is None else zeros.betas[:count],
        source=zeros.source,
        height=T,
    )


def conjugate_pairs(zeros: ZeroSet) -> List[Tuple[complex, complex]]:
    return [(complex(rho), complex(rho.conjugate())) for rho in zeros.rhos]


def expand_conjugates(zeros: ZeroSet) -> np.ndarray:
    """All zeros as [ρ1, ρ̄1, ρ2, ρ̄2, ...], ascending in γ."""
    rhos = zeros.rhos
    expanded = np.empty(2 * rhos.shape[0], dtype=np.complex128)
    expanded[0::2] = rhos
    expanded[1::2] = np.conj(rhos)
    return expanded


def describe_zeros(zeros: ZeroSet) -> Dict[str, Any]:
    if zeros.betas is None:
        policy = "beta = 1/2 (default)"
    else:
        policy = f"explicit beta, max {format_float(zeros.beta_bar)}"
    return {
        "source": zeros.source,
        "count": zeros.count,
        "gamma_min": float(zeros.gammas[0]) if zeros.count else None,
        "gamma_max": float(zeros.gammas[-1]) if zeros.count else None,
        "beta_policy": policy,
    }
