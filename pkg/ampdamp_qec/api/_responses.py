"""
Result models for the amplitude damping code toolkit.

This module contains Pydantic models that represent the results computed by
the stabilizer engine, the recovery builders and the fidelity lab.
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator

from ._base import ResultModel, TableResult


class KLReport(ResultModel):
    """Outcome of a Knill-Laflamme check over a set of errors."""
    correctable: bool = Field(..., description="True when every block is scalar within tolerance")
    gram: np.ndarray = Field(..., description="Matrix of scalars C_ab, one per error pair")
    max_violation: float = Field(..., ge=0, description="Largest deviation from the KL form")
    tolerance: float = Field(..., gt=0, description="Tolerance the check was run with")

    @property
    def error_count(self) -> int:
        return int(self.gram.shape[0])

    def summary(self) -> str:
        verdict = "true" if self.correctable else "false"
        return f"correctable: {verdict}, max_violation {self.max_violation:.3e}"


class SyndromeOutcome(ResultModel):
    """One syndrome of a recovery operation and what it implies."""
    label: str = Field(..., description="Element label, e.g. 'damped:1,5' or 'no_damping:+'")
    measured: List[Tuple[str, int]] = Field(
        default_factory=list, description="Measured generators with outcome +1 or -1"
    )
    damped: Tuple[int, ...] = Field(default=(), description="Inferred damped qubits, 1-based")
    correction: str = Field("", description="Correction applied before decoding")
    residual_dim: int = Field(..., ge=0, description="Dimension of the preserved logical subspace")
    preserved_logicals: List[str] = Field(
        default_factory=list, description="Signed logical Z products fixed on the branch"
    )


class FidelityPoint(ResultModel):
    """Entanglement fidelity of one pipeline at one damping probability."""
    gamma: float = Field(..., ge=0, le=1)
    code: str
    recovery_mode: str
    k: int = Field(..., ge=1)
    fidelity: float
    normalized_fidelity: float
    truncation_order: Optional[int] = Field(None, description="None for the full channel")
    truncation_bound: float = Field(0.0, ge=0, description="Upper bound on the truncation error")
    contributions: Dict[int, float] = Field(
        default_factory=dict, description="Partial fidelity by number of dampings"
    )

    @field_validator("fidelity", "normalized_fidelity")
    @classmethod
    def _clip(cls, value: float) -> float:
        # Round-off may push exact values marginally past the unit interval.
        return min(max(value, 0.0), 1.0)

    def to_row(self, digits: int = 12) -> Dict[str, Any]:
        """CSV row with numbers capped at ``digits`` significant digits."""
        return {
            "gamma": format_number(self.gamma, digits),
            "code": self.code,
            "recovery_mode": self.recovery_mode,
            "k": str(self.k),
            "fidelity": format_number(self.fidelity, digits),
            "normalized_fidelity": format_number(self.normalized_fidelity, digits),
            "truncation_order": "none" if self.truncation_order is None else str(self.truncation_order),
            "truncation_bound": format_number(self.truncation_bound, digits),
        }


CSV_COLUMNS = (
    "gamma",
    "code",
    "recovery_mode",
    "k",
    "fidelity",
    "normalized_fidelity",
    "truncation_order",
    "truncation_bound",
)


def format_number(value: float, digits: int = 12) -> str:
    """Shortest round-trip representation after rounding to ``digits`` significant digits."""
    return repr(float(f"{value:.{digits}g}"))


class FidelityCurve(TableResult[FidelityPoint]):
    """Fidelity points of one code and recovery mode, ordered by gamma."""
    code: str
    recovery_mode: str
    k: int = Field(..., ge=1)
    truncation_order: Optional[int] = None
    provenance: Dict[str, Any] = Field(default_factory=dict)

    @property
    def gammas(self) -> List[float]:
        return [point.gamma for point in self.rows]

    @property
    def fidelity(self) -> List[float]:
        return [point.fidelity for point in self.rows]

    @property
    def normalized(self) -> List[float]:
        return [point.normalized_fidelity for point in self.rows]

    @property
    def truncation_bound(self) -> List[float]:
        return [point.truncation_bound for point in self.rows]


class ContributionReport(ResultModel):
    """Fidelity split by the number of dampings in the channel pattern."""
    gamma: float
    code: str
    recovery_mode: str
    by_order: Dict[int, float] = Field(default_factory=dict)

    @property
    def total(self) -> float:
        return float(sum(self.by_order.values()))


__all__ = [
    "KLReport",
    "SyndromeOutcome",
    "FidelityPoint",
    "FidelityCurve",
    "ContributionReport",
    "CSV_COLUMNS",
    "format_number",
]
