"""Fidelity Lab.

This module evaluates the entanglement fidelity of encode, damp and recover
pipelines at the maximally mixed logical input, splits it by damping order,
and sweeps it over grids of damping probabilities.
"""
from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError
from scipy import sparse

from ..config import config
from ._enums import GammaSpacing
from ._exceptions import DimensionMismatchError, QECError, QECUsageError
from ._requests import GammaRange
from ._responses import ContributionReport, FidelityCurve, FidelityPoint
from .damping import enumerate_kraus
from .recovery import RecoveryOperation, build_recovery
from .stabilizer import StabilizerCode, codewords

logger = logging.getLogger(__name__)

Matrix = Union[np.ndarray, sparse.spmatrix]
RecoveryFactory = Callable[[float], RecoveryOperation]


def entanglement_fidelity(rho: np.ndarray, kraus: Iterable[Matrix]) -> float:
    """Sum of |tr(rho K)|^2 over the Kraus operators.

    Raises:
        DimensionMismatchError: If rho is not square or an operator does not match it.
        QECError: If rho is not a density matrix.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError(f"rho must be square, got shape {rho.shape}")
    tol = config.oracle_tolerance
    if abs(np.trace(rho) - 1.0) > tol or not np.allclose(rho, rho.conj().T, atol=tol):
        raise QECError("rho must be Hermitian with unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise QECError("rho must be positive semidefinite")
    total = 0.0
    for op in kraus:
        if op.shape != rho.shape:
            raise DimensionMismatchError(
                f"Kraus operator has shape {op.shape}, rho has {rho.shape}"
            )
        if sparse.issparse(op):
            value = op.multiply(rho.T).sum()
        else:
            value = np.sum(np.asarray(op) * rho.T)
        total += abs(value) ** 2
    return float(total)


def baseline_unencoded(k: int, gamma: float) -> float:
    """Fidelity of k unprotected qubits, ((1 + sqrt(1 - gamma)) / 2)^(2k)."""
    return float(((1.0 + np.sqrt(1.0 - gamma)) / 2.0) ** (2 * k))


def repeated_block_fidelity(fidelity: float, copies: int) -> float:
    """Fidelity of ``copies`` independent blocks of the same code."""
    return float(fidelity ** copies)


def resolve_truncation(n: int, truncation: Optional[int] = None, exact: bool = False) -> Optional[int]:
    """Damping order to keep: None (full channel) when exact, else the given or default order."""
    if exact:
        return None
    if truncation is None:
        return config.default_truncation(n)
    return truncation


def _check_dimensions(code: StabilizerCode, recovery: RecoveryOperation) -> None:
    if (code.n, code.k) != (recovery.n, recovery.k):
        raise DimensionMismatchError(
            f"Recovery for [{recovery.n},{recovery.k}] does not match code "
            f"{code.name} [{code.n},{code.k}]"
        )


def _order_fidelities(
    code: StabilizerCode,
    recovery: RecoveryOperation,
    gamma: float,
    truncation: Optional[int],
) -> Tuple[Dict[int, float], float]:
    """Fidelity split by damping order, and the discarded weight of the channel."""
    _check_dimensions(code, recovery)
    v = codewords(code)
    d = v.shape[1]
    stacked = recovery.stacked()
    count = len(recovery)
    channel = enumerate_kraus(code.n, gamma, truncation)
    top = code.n if truncation is None else min(truncation, code.n)
    by_order: Dict[int, float] = {order: 0.0 for order in range(top + 1)}
    for kraus in channel:
        image = kraus.apply(v)
        if not np.any(image):
            continue
        composite = np.asarray(stacked @ image).reshape(count, d, d)
        traces = np.einsum("jaa->j", composite)
        by_order[kraus.order] += float(np.sum(np.abs(traces) ** 2)) / d ** 2
    return by_order, channel.discarded_weight


def pipeline_fidelity(
    code: StabilizerCode,
    recovery: RecoveryOperation,
    gamma: float,
    truncation: Optional[int] = None,
) -> Tuple[float, float]:
    """Entanglement fidelity of encode, damp, recover at rho = I/2^k.

    Args:
        code: The code supplying the encoding isometry.
        recovery: Recovery elements for the same code.
        gamma: Damping probability.
        truncation: Highest number of dampings kept, None for the full channel.

    Returns:
        (fidelity, bound): the fidelity over the kept patterns and the weight
        of the discarded ones, which bounds how much it underestimates.

    Raises:
        DimensionMismatchError: If the recovery belongs to a code of another size.
    """
    by_order, bound = _order_fidelities(code, recovery, gamma, truncation)
    return float(sum(by_order.values())), bound


def syndrome_contributions(
    code: StabilizerCode,
    recovery: RecoveryOperation,
    gamma: float,
    truncation: Optional[int] = None,
) -> ContributionReport:
    """Partial fidelities keyed by the number of damped qubits in the channel pattern."""
    by_order, _ = _order_fidelities(code, recovery, gamma, truncation)
    return ContributionReport(
        gamma=gamma, code=code.name, recovery_mode=recovery.mode.value, by_order=by_order
    )


def evaluate_point(
    code: StabilizerCode,
    recovery: RecoveryOperation,
    gamma: float,
    truncation: Optional[int] = None,
    copies: int = 1,
    label: Optional[str] = None,
) -> FidelityPoint:
    """One curve point, optionally for ``copies`` independent blocks."""
    by_order, bound = _order_fidelities(code, recovery, gamma, truncation)
    fidelity = float(sum(by_order.values()))
    total = repeated_block_fidelity(fidelity, copies)
    if copies > 1:
        bound = 1.0 - (1.0 - bound) ** copies
        by_order = {}
    k = code.k * copies
    if bound > config.truncation_warn_bound:
        logger.warning(
            "Truncation bound %.3e at gamma=%g for %s exceeds %.1e",
            bound, gamma, code.name, config.truncation_warn_bound,
        )
    logger.debug("%s %s gamma=%g: fidelity %.12g", code.name, recovery.mode.value, gamma, total)
    return FidelityPoint(
        gamma=gamma,
        code=label or code.name,
        recovery_mode=recovery.mode.value,
        k=k,
        fidelity=total,
        normalized_fidelity=max(total, 0.0) ** (1.0 / k),
        truncation_order=truncation,
        truncation_bound=bound,
        contributions=by_order,
    )


def gamma_grid(
    gamma_min: float,
    gamma_max: float,
    steps: int,
    spacing: Union[str, GammaSpacing] = GammaSpacing.LINEAR,
) -> List[float]:
    """Ascending grid of damping probabilities.

    Raises:
        QECUsageError: If the range is outside [0, 1], inverted, or has no points.
    """
    try:
        return GammaRange(
            gamma_min=gamma_min, gamma_max=gamma_max, steps=steps, spacing=spacing
        ).grid()
    except ValidationError as e:
        raise QECUsageError(f"Invalid gamma range: {e.errors()[0]['msg']}") from e


def recovery_factory(code_name: str, mode: Optional[str] = None) -> RecoveryFactory:
    """Factory building the registry recovery of ``code_name`` at a given gamma."""
    def build(gamma: float) -> RecoveryOperation:
        return build_recovery(code_name, mode, gamma)
    return build


def sweep(
    code: StabilizerCode,
    factory: RecoveryFactory,
    grid: Sequence[float],
    truncation: Optional[int] = None,
    copies: int = 1,
    label: Optional[str] = None,
) -> FidelityCurve:
    """Fidelity curve over ``grid``.

    The recovery is rebuilt at each gamma when its mode depends on gamma and
    built once otherwise.

    Raises:
        QECUsageError: If a grid point lies outside [0, 1].
    """
    if any(not 0.0 <= g <= 1.0 for g in grid):
        raise QECUsageError("Every gamma must lie in [0, 1]")
    grid = sorted(grid)
    points: List[FidelityPoint] = []
    fixed: Optional[RecoveryOperation] = None
    for gamma in grid:
        recovery = fixed or factory(gamma)
        if not recovery.mode.needs_gamma:
            fixed = recovery
        points.append(evaluate_point(code, recovery, gamma, truncation, copies, label))
    mode = points[0].recovery_mode if points else ""
    return FidelityCurve(
        rows=points,
        code=label or code.name,
        recovery_mode=mode,
        k=code.k * copies,
        truncation_order=truncation,
        provenance={"copies": copies, "points": len(points), "n": code.n},
    )


__all__ = [
    "entanglement_fidelity",
    "baseline_unencoded",
    "repeated_block_fidelity",
    "resolve_truncation",
    "pipeline_fidelity",
    "syndrome_contributions",
    "evaluate_point",
    "gamma_grid",
    "recovery_factory",
    "sweep",
]
