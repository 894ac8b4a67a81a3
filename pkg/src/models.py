import math
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from utilities.constants import LOG_OVERFLOW_THRESHOLD, MAX_BINOMIAL_K


def _readonly_array(value: Any, dtype: type) -> np.ndarray:
    arr = np.ascontiguousarray(value, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class Method(str, Enum):
    """Algorithm used for the Cesàro left-hand side"""

    DIRECT = "direct"
    BINOMIAL = "binomial"
    BRUTEFORCE = "bruteforce"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class FormulaConvention(str, Enum):
    """Which form of the M2 and M4 zero sums is evaluated"""

    DERIVED = "derived"
    PRINTED = "printed"


class VerifySuite(str, Enum):
    LAPLACE = "laplace"
    STIRLING = "stirling"
    LEMMA2 = "lemma2"
    LEMMA3 = "lemma3"
    GAMMA = "gamma"
    PNT = "pnt"
    GENERATING = "generating"


class LambdaTable(BaseModel):
    """Sieved von Mangoldt values, weights[n] = Λ(n) for 0 <= n <= limit"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    limit: int = Field(ge=1)
    weights: np.ndarray

    @field_validator("weights", mode="before")
    @classmethod
    def as_weights(cls, v: Any) -> np.ndarray:
        return _readonly_array(v, np.float64)

    @model_validator(mode="after")
    def check_length(self) -> "LambdaTable":
        if self.weights.shape[0] != self.limit + 1:
            raise ValueError(
                f"weights has {self.weights.shape[0]} entries, expected {self.limit + 1}"
            )
        return self

    @cached_property
    def prime_powers(self) -> np.ndarray:
        """Ascending n with Λ(n) != 0."""
        indices = np.flatnonzero(self.weights).astype(np.int64)
        indices.setflags(write=False)
        return indices


class SquareSupport(BaseModel):
    """Prime powers m with m² <= limit, stored as parallel arrays"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    limit: int = Field(ge=1)
    m: np.ndarray
    msq: np.ndarray
    weight: np.ndarray

    @field_validator("m", "msq", mode="before")
    @classmethod
    def as_integers(cls, v: Any) -> np.ndarray:
        return _readonly_array(v, np.int64)

    @field_validator("weight", mode="before")
    @classmethod
    def as_weights(cls, v: Any) -> np.ndarray:
        return _readonly_array(v, np.float64)

    @model_validator(mode="after")
    def check_entries(self) -> "SquareSupport":
        if not (self.m.shape == self.msq.shape == self.weight.shape):
            raise ValueError("m, msq and weight must have the same length")
        if np.any(np.diff(self.m) <= 0):
            raise ValueError("entries must be strictly ascending in m")
        if np.any(self.weight <= 0):
            raise ValueError("every entry must carry a positive weight")
        if np.any(self.msq != self.m * self.m):
            raise ValueError("msq must equal m * m")
        if self.msq.size and self.msq[-1] > self.limit:
            raise ValueError("an entry exceeds the square limit")
        return self

    @property
    def count(self) -> int:
        return int(self.m.shape[0])


class CesaroParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int = Field(ge=1)
    k: float = Field(ge=0.0)
    method: Method = Method.DIRECT

    @field_validator("k")
    @classmethod
    def finite_k(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("k must be finite")
        return v

    @model_validator(mode="after")
    def check_method(self) -> "CesaroParams":
        if self.method == Method.BINOMIAL and (
            not self.is_integer_k or self.k > MAX_BINOMIAL_K
        ):
            raise ValueError(
                f"binomial method needs an integer k <= {MAX_BINOMIAL_K}, got k={self.k}"
            )
        return self

    @property
    def is_integer_k(self) -> bool:
        return float(self.k).is_integer()


class RspTable(BaseModel):
    """values[n] = r_SP(n) for 0 <= n <= limit"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    limit: int = Field(ge=1)
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def as_values(cls, v: Any) -> np.ndarray:
        return _readonly_array(v, np.float64)


class LogGammaValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    logmod: float
    arg: float

    @property
    def overflow(self) -> bool:
        return self.logmod > LOG_OVERFLOW_THRESHOLD

    def to_complex(self) -> complex:
        return complex(self.logmod, self.arg)


class GammaRatio(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: complex
    log_modulus: float
    underflow: bool = False


class ZeroSet(BaseModel):
    """
    Ordinates γ > 0 of nontrivial zeros, strictly ascending.
    betas is None when every real part is 1/2.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    gammas: np.ndarray
    betas: Optional[np.ndarray] = None
    source: str = ""
    height: Optional[float] = None

    @field_validator("gammas", mode="before")
    @classmethod
    def as_gammas(cls, v: Any) -> np.ndarray:
        arr = _readonly_array(v, np.float64)
        if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("ordinates must be finite and positive")
        if np.any(np.diff(arr) <= 0):
            raise ValueError("ordinates must be strictly ascending")
        return arr

    @field_validator("betas", mode="before")
    @classmethod
    def as_betas(cls, v: Any) -> Optional[np.ndarray]:
        if v is None:
            return None
        arr = _readonly_array(v, np.float64)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise ValueError("real parts must lie in (0, 1)")
        return arr

    @model_validator(mode="after")
    def check_betas(self) -> "ZeroSet":
        if self.betas is not None and self.betas.shape != self.gammas.shape:
            raise ValueError("betas and gammas must have the same length")
        return self

    @property
    def count(self) -> int:
        return int(self.gammas.shape[0])

    @property
    def beta_array(self) -> np.ndarray:
        if self.betas is None:
            return np.full(self.count, 0.5)
        return self.betas

    @property
    def beta_bar(self) -> Optional[float]:
        """Largest real part present, or None for an empty set."""
        if self.count == 0:
            return None
        return float(self.beta_array.max())

    @property
    def rhos(self) -> np.ndarray:
        """Upper half-plane zeros β + iγ, ascending in γ."""
        return self.beta_array + 1j * self.gammas


class ExplicitTerms(BaseModel):
    model_config = ConfigDict(frozen=True)

    m1: float
    m2: float
    m3: float
    m4: float
    T: Optional[float] = None
    zeros_used: int = 0
    imag_residue: float = 0.0
    term_counts: Dict[str, int] = Field(default_factory=dict)
    convention: FormulaConvention = FormulaConvention.DERIVED
    pair_reduced: bool = False
    secondary: Optional[float] = None

    @property
    def total(self) -> float:
        return self.m1 + self.m2 + self.m3 + self.m4


class ComparisonReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: CesaroParams
    lhs: float
    terms: ExplicitTerms
    residual: float
    normalized_residual: float
    warnings: List[str] = Field(default_factory=list)

    @classmethod
    def assemble(
        cls,
        params: CesaroParams,
        lhs: float,
        terms: ExplicitTerms,
        warnings: Optional[List[str]] = None,
    ) -> "ComparisonReport":
        residual = lhs - terms.total
        scale = math.exp((params.k + 1.0) * math.log(params.N))
        return cls(
            params=params,
            lhs=lhs,
            terms=terms,
            residual=residual,
            normalized_residual=residual / scale,
            warnings=list(warnings or []),
        )

    @property
    def secondary_residual(self) -> Optional[float]:
        if self.terms.secondary is None:
            return None
        return self.residual - self.terms.secondary


class LineQuadratureSpec(BaseModel):
    """Trapezoid rule along v = a + it, |t| <= height"""

    model_config = ConfigDict(frozen=True)

    a: float = Field(gt=0.0)
    height: float = Field(gt=0.0)
    step: float = Field(gt=0.0, lt=1.0)

    @classmethod
    def default_for(cls, s: complex) -> "LineQuadratureSpec":
        return cls(a=1.0, height=max(200.0, 50.0 / complex(s).real), step=1e-2)

    @property
    def node_count(self) -> int:
        return 2 * math.ceil(self.height / self.step) + 1


class StildeValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    ell: int = Field(ge=1)
    z: complex
    value: complex
    terms_used: int
    tail_bound: float


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, validated before any computation"""

    N: Optional[int] = Field(default=None, ge=1)
    k: Optional[float] = Field(default=None, ge=0.0)
    T: float = Field(gt=0.0)
    zeros: Optional[Path] = None
    cache_dir: Path
    output_format: Optional[OutputFormat] = None
    threads: int = Field(ge=1)
    term_budget: int = Field(ge=1)
    verbosity: int = 0

    @field_validator("zeros")
    @classmethod
    def zero_file_exists(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and not v.is_file():
            raise ValueError(f"zero table {v} does not exist")
        return v

    @field_validator("cache_dir")
    @classmethod
    def cache_dir_usable(cls, v: Path) -> Path:
        if v.exists() and not v.is_dir():
            raise ValueError(f"cache path {v} exists and is not a directory")
        return v
