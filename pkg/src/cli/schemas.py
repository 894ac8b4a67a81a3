import math
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from models import ComparisonReport, FormulaConvention


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


class ReportSchema(BaseModel):
    """Flat JSON shape of a comparison report"""

    N: int
    k: float
    T: Optional[float]
    zeros_used: int
    lhs: float
    m1: float
    m2: float
    m3: float
    m4: float
    residual: float
    normalized_residual: float
    imag_residue: float
    warnings: List[str]
    convention: FormulaConvention
    pair_reduced: bool
    secondary: Optional[float] = None
    secondary_residual: Optional[float] = None

    @classmethod
    def from_report(cls, report: ComparisonReport) -> "ReportSchema":
        terms = report.terms
        return cls(
            N=report.params.N,
            k=report.params.k,
            T=_finite_or_none(terms.T),
            zeros_used=terms.zeros_used,
            lhs=report.lhs,
            m1=terms.m1,
            m2=terms.m2,
            m3=terms.m3,
            m4=terms.m4,
            residual=report.residual,
            normalized_residual=report.normalized_residual,
            imag_residue=terms.imag_residue,
            warnings=list(report.warnings),
            convention=terms.convention,
            pair_reduced=terms.pair_reduced,
            secondary=terms.secondary,
            secondary_residual=report.secondary_residual,
        )

    def to_record(self) -> Dict[str, Any]:
        record = self.model_dump()
        for key in ("secondary", "secondary_residual"):
            if record[key] is None:
                del record[key]
        return record


class ScanRow(BaseModel):
    """One (N, k) grid point of a scan"""

    N: int
    k: float
    T: Optional[float]
    lhs: float
    m1: float
    m2: float
    m3: float
    m4: float
    residual: float
    normalized_residual: float

    @classmethod
    def from_report(cls, report: ComparisonReport) -> "ScanRow":
        terms = report.terms
        return cls(
            N=report.params.N,
            k=report.params.k,
            T=_finite_or_none(terms.T),
            lhs=report.lhs,
            m1=terms.m1,
            m2=terms.m2,
            m3=terms.m3,
            m4=terms.m4,
            residual=report.residual,
            normalized_residual=report.normalized_residual,
        )


class Check(BaseModel):
    """
    One named verification result. Checks without a tolerance are
    informational (fitted constants and the like) and always pass.
    """

    name: str
    measured: float
    reference: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool = Field(serialization_alias="pass")

    def to_record(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)
