"""Recovery for the [4,1] code with a tunable no-damping branch.

R1 and R2 act on the no-damping branch and are parameterized by (alpha, beta)
with alpha^2 + beta^2 = 1. R3 to R6 undo single dampings and R7 to R10 send
the double-damping states that keep any information back to |0_L>.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ...config import config
from .._enums import RecoveryMode
from .._exceptions import UnknownModeError
from ..codes import leung_41
from ..damping import enumerate_kraus
from ..stabilizer import codewords
from ._base import RecoveryElement, RecoveryOperation, branch_syndrome, require_gamma

logger = logging.getLogger(__name__)

LEUNG_MODES = (RecoveryMode.PROJECTION, RecoveryMode.PERTURBED, RecoveryMode.SWEEP_OPTIMIZED)

# Single dampings: (damped qubit, state reached from |0_L>, state reached from |1_L>).
_SINGLE = [(1, "0111", "0100"), (2, "1011", "1000"), (3, "1101", "0001"), (4, "1110", "0010")]
# Double dampings that leave a state outside the code space: (qubits, state).
_DOUBLE = [((2, 3), "1001"), ((2, 4), "1010"), ((1, 3), "0101"), ((1, 4), "0110")]


def _ket(bits: str) -> np.ndarray:
    vec = np.zeros(16, dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def _no_damping_parts() -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """P, Q, S, T with R1 = alpha P + beta Q + S and R2 = beta P - alpha Q + T."""
    zero = np.array([[1.0], [0.0]], dtype=complex)
    one = np.array([[0.0], [1.0]], dtype=complex)
    p = zero @ _ket("0000")[None, :]
    q = zero @ _ket("1111")[None, :]
    s = one @ ((_ket("0011") + _ket("1100")) / np.sqrt(2.0))[None, :]
    t = one @ ((_ket("0011") - _ket("1100")) / np.sqrt(2.0))[None, :]
    return p, q, s, t


def _fixed_elements() -> List[Tuple[str, np.ndarray, object]]:
    zero = np.array([[1.0], [0.0]], dtype=complex)
    one = np.array([[0.0], [1.0]], dtype=complex)
    elements = []
    for index, (qubit, from_zero, from_one) in enumerate(_SINGLE, start=3):
        matrix = zero @ _ket(from_zero)[None, :] + one @ _ket(from_one)[None, :]
        syndrome = branch_syndrome(f"R{index}:damped:{qubit}", 2, damped=(qubit,))
        elements.append((f"R{index}", matrix, syndrome))
    for index, (qubits, state) in enumerate(_DOUBLE, start=7):
        matrix = zero @ _ket(state)[None, :]
        label = ",".join(str(q) for q in qubits)
        syndrome = branch_syndrome(f"R{index}:damped:{label}", 1, damped=qubits)
        elements.append((f"R{index}", matrix, syndrome))
    return elements


def _traces(gamma: float) -> Tuple[np.ndarray, float]:
    """Per-Kraus traces of P, Q, S, T against K V, and the fixed elements' fidelity."""
    v = codewords(leung_41())
    parts = _no_damping_parts()
    fixed = [matrix for _, matrix, _ in _fixed_elements()]
    rows = []
    constant = 0.0
    for kraus in enumerate_kraus(4, gamma):
        image = kraus.apply(v)
        rows.append([np.trace(part @ image) for part in parts])
        constant += sum(abs(np.trace(matrix @ image)) ** 2 for matrix in fixed)
    return np.array(rows), constant / 4.0


def no_damping_fidelity(alpha: np.ndarray, traces: np.ndarray, constant: float) -> np.ndarray:
    """Entanglement fidelity as a function of alpha, vectorized over alpha."""
    alpha = np.atleast_1d(alpha).astype(float)
    beta = np.sqrt(np.clip(1.0 - alpha ** 2, 0.0, 1.0))
    tp, tq, ts, tt = (traces[:, i][:, None] for i in range(4))
    r1 = alpha[None, :] * tp + beta[None, :] * tq + ts
    r2 = beta[None, :] * tp - alpha[None, :] * tq + tt
    return constant + (np.abs(r1) ** 2 + np.abs(r2) ** 2).sum(axis=0) / 4.0


def perturbed_alpha(gamma: float) -> float:
    """alpha proportional to 1 and beta to (1 - gamma)^2, normalized."""
    beta = (1.0 - gamma) ** 2
    return float(1.0 / np.sqrt(1.0 + beta ** 2))


def sweep_alpha(gamma: float) -> Tuple[float, Dict[str, float]]:
    """Best alpha in [1/sqrt(2), 1]: grid search, then bounded golden-section refinement."""
    traces, constant = _traces(gamma)
    low = 1.0 / np.sqrt(2.0)
    grid = np.arange(low, 1.0 + config.sweep_grid_step / 2, config.sweep_grid_step)
    grid = np.clip(np.append(grid, [low, perturbed_alpha(gamma), 1.0]), low, 1.0)
    values = no_damping_fidelity(grid, traces, constant)
    best = int(np.argmax(values))
    alpha, fidelity = float(grid[best]), float(values[best])
    bracket = (max(low, alpha - config.sweep_grid_step), min(1.0, alpha + config.sweep_grid_step))
    if bracket[1] > bracket[0]:
        refined = minimize_scalar(
            lambda a: -float(no_damping_fidelity(a, traces, constant)[0]),
            bounds=bracket,
            method="bounded",
            options={"xatol": 1e-12},
        )
        if -refined.fun > fidelity:
            alpha, fidelity = float(refined.x), float(-refined.fun)
    return alpha, {"grid_points": float(grid.size), "fidelity": fidelity}


def leung41_recovery(
    mode: RecoveryMode = RecoveryMode.PROJECTION, gamma: Optional[float] = None
) -> RecoveryOperation:
    """Recovery for the [4,1] code.

    Args:
        mode: ``projection`` (alpha = beta = 1/sqrt(2)), ``perturbed``
            (beta/alpha = (1 - gamma)^2) or ``sweep_optimized`` (alpha chosen
            to maximize the entanglement fidelity at ``gamma``).
        gamma: Damping probability, required unless the mode is projection.

    Raises:
        UnknownModeError: For modes other than the three above.
        MissingGammaError: If a gamma-dependent mode lacks gamma.
    """
    mode = RecoveryMode(mode)
    if mode not in LEUNG_MODES:
        raise UnknownModeError(mode.value, "leung41")
    gamma = require_gamma(mode, gamma)
    metadata: Dict[str, float] = {}
    if mode == RecoveryMode.PROJECTION:
        alpha = 1.0 / np.sqrt(2.0)
    elif mode == RecoveryMode.PERTURBED:
        alpha = perturbed_alpha(gamma)
    else:
        alpha, metadata = sweep_alpha(gamma)
    beta = float(np.sqrt(max(0.0, 1.0 - alpha ** 2)))
    p, q, s, t = _no_damping_parts()

    elements = [
        RecoveryElement.from_dense(
            "R1", alpha * p + beta * q + s, branch_syndrome("R1:no_damping:+", 2)
        ),
        RecoveryElement.from_dense(
            "R2", beta * p - alpha * q + t, branch_syndrome("R2:no_damping:-", 2)
        ),
    ]
    elements += [RecoveryElement.from_dense(label, m, syn) for label, m, syn in _fixed_elements()]
    logger.debug("leung41 recovery %s: alpha=%.6f beta=%.6f", mode.value, alpha, beta)
    return RecoveryOperation(
        rows=elements,
        code="leung41",
        n=4,
        k=1,
        mode=mode,
        gamma=gamma,
        metadata={"alpha": float(alpha), "beta": beta, **metadata},
    )


__all__ = ["leung41_recovery", "perturbed_alpha", "sweep_alpha", "no_damping_fidelity", "LEUNG_MODES"]
