"""Recovery for codes built from classical parity checks, such as the [7,3] code.

The Z-type checks read out the column of the parity check matrix, which names
the damped qubit. The all-X generator tells X_i from Y_i, since a damping is
the combination (X_i + iY_i)/2.
"""
from __future__ import annotations

import logging
from typing import List, Optional

from .._enums import NoDampingMode, RecoveryMode
from .._exceptions import InvalidCodeError
from ..codes import hamming_73
from ..pauli import PauliOperator, commutes
from ..stabilizer import StabilizerCode, codewords
from ._base import RecoveryElement, RecoveryOperation, branch_syndrome, require_gamma
from .pair import no_damping_elements

logger = logging.getLogger(__name__)


def _check_parity_layout(code: StabilizerCode) -> None:
    *z_checks, all_x = code.group.generators
    if all_x.z or all_x.x != (1 << code.n) - 1 or any(g.x for g in z_checks):
        raise InvalidCodeError(
            f"{code.name} is not a Z-check code with a trailing all-X generator"
        )


def parity_code_recovery(
    code: StabilizerCode,
    no_damping_mode: NoDampingMode = NoDampingMode.PROJECTION,
    gamma: Optional[float] = None,
) -> RecoveryOperation:
    """Single-damping recovery for a Z-check code with an all-X generator."""
    _check_parity_layout(code)
    no_damping_mode = NoDampingMode(no_damping_mode)
    mode = RecoveryMode.PERTURBED if no_damping_mode == NoDampingMode.PERTURBED else RecoveryMode.PROJECTION
    gamma = require_gamma(mode, gamma)
    v = codewords(code)
    generators = code.group.generators
    base = [(str(g), 1) for g in generators[:-1]]

    elements: List[RecoveryElement] = no_damping_elements(code, v, no_damping_mode, gamma, base)
    for qubit in range(1, code.n + 1):
        for letter in "XY":
            error = PauliOperator.single(code.n, qubit, letter)
            measured = [(str(g), 1 if commutes(g, error) else -1) for g in generators]
            label = f"{letter}{qubit}"
            syndrome = branch_syndrome(
                label, 1 << code.k, measured, damped=(qubit,), correction=label,
                preserved=[str(z) for z in code.logical_z],
            )
            elements.append(RecoveryElement.from_dense(label, error.apply(v).conj().T, syndrome))

    logger.debug("Built %d-element recovery for %s (%s)", len(elements), code.name, mode.value)
    return RecoveryOperation(
        rows=elements,
        code=code.name,
        n=code.n,
        k=code.k,
        mode=mode,
        gamma=gamma,
        metadata={"no_damping_mode": no_damping_mode.value},
    )


def hamming73_recovery(
    no_damping_mode: NoDampingMode = NoDampingMode.PROJECTION,
    gamma: Optional[float] = None,
    code: Optional[StabilizerCode] = None,
) -> RecoveryOperation:
    """The 16-element recovery of the [7,3] code.

    ``code`` replaces the default logical operator choice, e.g. a completion
    under another alphabet; the stabilizer must be the [7,3] one.
    """
    return parity_code_recovery(code or hamming_73(), no_damping_mode, gamma)


__all__ = ["hamming73_recovery", "parity_code_recovery"]
