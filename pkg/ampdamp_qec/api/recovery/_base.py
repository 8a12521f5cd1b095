"""Recovery operation models and the linear algebra shared by the builders."""
from __future__ import annotations

import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from pydantic import ConfigDict, Field, model_validator
from scipy import sparse

from ...config import config
from .._base import ArrayModel, TableResult
from .._enums import RecoveryMode
from .._exceptions import MissingGammaError
from .._responses import SyndromeOutcome

logger = logging.getLogger(__name__)

# Entries below this magnitude are dropped when an element is stored sparsely.
_ZERO = 1e-14


class RecoveryElement(ArrayModel):
    """One recovery Kraus element, a ``2^k x 2^n`` map to the logical space."""
    label: str = Field(..., description="Syndrome label")
    matrix: sparse.csr_matrix = Field(..., description="Element as a sparse matrix")
    syndrome: SyndromeOutcome

    @classmethod
    def from_dense(cls, label: str, dense: np.ndarray, syndrome: SyndromeOutcome) -> "RecoveryElement":
        cleaned = np.where(np.abs(dense) > _ZERO, dense, 0.0)
        return cls(label=label, matrix=sparse.csr_matrix(cleaned), syndrome=syndrome)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


class RecoveryOperation(TableResult[RecoveryElement]):
    """A complete set of recovery elements for one code and mode."""
    code: str
    n: int = Field(..., ge=1)
    k: int = Field(..., ge=1)
    mode: RecoveryMode
    gamma: Optional[float] = Field(None, ge=0, le=1)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check_gamma(self) -> "RecoveryOperation":
        if self.mode.needs_gamma and self.gamma is None:
            raise ValueError(f"mode {self.mode.value} requires gamma")
        if not self.mode.needs_gamma and self.gamma is not None:
            raise ValueError(f"mode {self.mode.value} does not take gamma")
        return self

    @property
    def elements(self) -> List[RecoveryElement]:
        return self.rows

    @property
    def labels(self) -> List[str]:
        return [element.label for element in self.rows]

    def element(self, label: str) -> RecoveryElement:
        for element in self.rows:
            if element.label == label:
                return element
        raise KeyError(label)

    def stacked(self) -> sparse.csr_matrix:
        """All elements stacked vertically, ``(J * 2^k) x 2^n``."""
        return sparse.vstack([element.matrix for element in self.rows], format="csr")

    def completeness(self) -> np.ndarray:
        """Dense sum of R^dag R."""
        stacked = self.stacked()
        return (stacked.conj().T @ stacked).toarray()

    def completeness_excess(self) -> float:
        """Largest eigenvalue of sum R^dag R minus one; at most round-off for a valid operation."""
        return float(np.max(np.linalg.eigvalsh(self.completeness())) - 1.0)

    def completeness_deficit(self) -> float:
        """Largest eigenvalue of I - sum R^dag R, zero for a complete partition."""
        total = self.completeness()
        return float(np.max(np.linalg.eigvalsh(np.eye(total.shape[0]) - total)))

    def syndrome_table(self) -> List[SyndromeOutcome]:
        return [element.syndrome for element in self.rows]


def require_gamma(mode: RecoveryMode, gamma: Optional[float]) -> Optional[float]:
    """Gamma for gamma-dependent modes, None otherwise."""
    if mode.needs_gamma:
        if gamma is None:
            raise MissingGammaError(mode.value)
        return float(gamma)
    return None


def polar_isometry(
    a: np.ndarray, tol: Optional[float] = None, scale: Optional[float] = None
) -> np.ndarray:
    """Isometric part of ``a`` from its SVD, restricted to its nonzero singular values.

    Singular values below ``tol`` times ``scale`` (the largest singular value
    of ``a`` by default) are dropped; a zero matrix gives a zero map.
    """
    tol = config.rank_tolerance if tol is None else tol
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    reference = scale if scale is not None else (s[0] if s.size else 0.0)
    if reference <= 0:
        return np.zeros(a.shape, dtype=complex)
    keep = s > tol * reference
    return u[:, keep] @ vh[keep, :]


def branch_isometries(
    main: np.ndarray,
    partners: Sequence[np.ndarray],
    tol: Optional[float] = None,
) -> List[np.ndarray]:
    """Orthogonal isometries for one syndrome branch.

    The first is the isometric part of ``main``. Each partner image is
    projected off the span of the isometries accepted before it and then
    replaced by its own isometric part.
    """
    isometries = [polar_isometry(main, tol)]
    for partner in partners:
        residual = np.array(partner, dtype=complex)
        scale = float(np.linalg.norm(residual, 2)) if residual.size else 0.0
        for q in isometries:
            residual = residual - q @ (q.conj().T @ residual)
        isometries.append(polar_isometry(residual, tol, scale))
    return isometries


# Gate actions on the rows of a state matrix, qubit 1 is the most significant bit.


def _bit(n: int, qubit: int) -> int:
    return 1 << (n - qubit)


def apply_x(states: np.ndarray, n: int, qubits: Iterable[int]) -> np.ndarray:
    mask = 0
    for q in qubits:
        mask |= _bit(n, q)
    idx = np.arange(1 << n)
    out = np.empty_like(states)
    out[idx ^ mask] = states[idx]
    return out


def apply_cnot_fan(states: np.ndarray, n: int, control: int) -> np.ndarray:
    """CNOT from ``control`` onto every other qubit."""
    idx = np.arange(1 << n)
    others = ((1 << n) - 1) ^ _bit(n, control)
    target = np.where(idx & _bit(n, control), idx ^ others, idx)
    out = np.empty_like(states)
    out[target] = states[idx]
    return out


def apply_h(states: np.ndarray, n: int, qubit: int) -> np.ndarray:
    bit = _bit(n, qubit)
    idx = np.arange(1 << n)
    low = idx[(idx & bit) == 0]
    high = low | bit
    out = np.empty(states.shape, dtype=complex)
    out[low] = (states[low] + states[high]) / np.sqrt(2.0)
    out[high] = (states[low] - states[high]) / np.sqrt(2.0)
    return out


def branch_syndrome(
    label: str,
    residual_dim: int,
    measured: Optional[List] = None,
    damped: Sequence[int] = (),
    correction: str = "",
    preserved: Optional[List[str]] = None,
) -> SyndromeOutcome:
    return SyndromeOutcome(
        label=label,
        measured=measured or [],
        damped=tuple(damped),
        correction=correction,
        residual_dim=residual_dim,
        preserved_logicals=preserved or [],
    )


def damped_label(damped: Sequence[int]) -> str:
    return "damped:" + ",".join(str(q) for q in sorted(damped))


__all__ = [
    "RecoveryElement",
    "RecoveryOperation",
    "require_gamma",
    "polar_isometry",
    "branch_isometries",
    "apply_x",
    "apply_cnot_fan",
    "apply_h",
    "branch_syndrome",
    "damped_label",
]
