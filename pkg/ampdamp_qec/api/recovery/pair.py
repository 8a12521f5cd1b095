"""Recovery for the [2(M+1), M] pair codes.

Damped branches are identified by the Z-pair outcomes plus one Z measurement
inside every damped pair. Each is undone by a Hadamard on the first damped
qubit, a CNOT from it onto every other qubit and an X on every damped qubit,
followed by decoding. The all-+1 branch is split by the all-X generator.
"""
from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .._enums import NoDampingMode, RecoveryMode
from .._exceptions import QECUsageError
from ..codes import MAX_PAIR_M, pair_code
from ..damping import pattern_kraus
from ..pauli import PauliOperator
from ..stabilizer import (
    StabilizerCode,
    codewords,
    damped_subspace_set,
    dimension,
    preserved_logicals,
    standard_pair_layout,
)
from ._base import (
    RecoveryElement,
    RecoveryOperation,
    apply_cnot_fan,
    apply_h,
    apply_x,
    branch_isometries,
    branch_syndrome,
    damped_label,
    require_gamma,
)

logger = logging.getLogger(__name__)


def syndrome_mask(n: int, pairs: Sequence[Tuple[int, int]], damped: Sequence[int]) -> np.ndarray:
    """Boolean mask of the basis states in the syndrome space of ``damped``.

    A damped qubit reads 0 and its partner 1; undamaged pairs are equal.
    """
    idx = np.arange(1 << n)

    def bit(q: int) -> np.ndarray:
        return (idx >> (n - q)) & 1

    mask = np.ones(1 << n, dtype=bool)
    for a, b in pairs:
        if a in damped:
            mask &= (bit(a) == 0) & (bit(b) == 1)
        elif b in damped:
            mask &= (bit(a) == 1) & (bit(b) == 0)
        else:
            mask &= bit(a) == bit(b)
    return mask


def undo_damping(v: np.ndarray, n: int, damped: Sequence[int], pivot: int) -> np.ndarray:
    """Image of the codewords under the inverse of the recovery unitary.

    The recovery unitary is H on ``pivot``, then CNOT from ``pivot`` onto every
    other qubit, then X on every damped qubit; its inverse applies the same
    gates in reverse order.
    """
    states = apply_x(v.astype(complex), n, damped)
    states = apply_cnot_fan(states, n, pivot)
    return apply_h(states, n, pivot)


def _pivot(damped: Sequence[int], pivot: str) -> int:
    if pivot == "lowest":
        return min(damped)
    if pivot == "highest":
        return max(damped)
    raise QECUsageError(f"Unknown pivot rule '{pivot}'")


def damped_sets(m: int) -> List[Tuple[int, ...]]:
    """Every choice of one qubit in each pair of every nonempty set of pairs."""
    pairs = standard_pair_layout(m)
    result = []
    for size in range(1, len(pairs) + 1):
        for chosen_pairs in itertools.combinations(pairs, size):
            for choice in itertools.product(*chosen_pairs):
                result.append(tuple(sorted(choice)))
    return result


def _measured(code: StabilizerCode, pairs, damped) -> List[Tuple[str, int]]:
    n = code.n
    measured = []
    for a, b in pairs:
        outcome = -1 if a in damped or b in damped else 1
        measured.append((str(PauliOperator.from_sites(n, {a: "Z", b: "Z"})), outcome))
    for a, b in pairs:
        if a in damped or b in damped:
            measured.append((str(PauliOperator.single(n, a, "Z")), 1 if a in damped else -1))
    return measured


def no_damping_elements(
    code: StabilizerCode,
    v: np.ndarray,
    mode: NoDampingMode,
    gamma: Optional[float],
    measured: List[Tuple[str, int]],
) -> List[RecoveryElement]:
    """The two elements of the branch where no Z-type check fired.

    The branch is split by the all-X outcome. With projection the +1 part is
    decoded directly and the -1 part after a Z on qubit 1. The perturbed
    variant decodes the normalized no-damping images of the codewords and
    assigns the rest of the branch to their Z_1 partners.
    """
    n = code.n
    z1 = PauliOperator.single(n, 1, "Z")
    all_x = str(PauliOperator.from_sites(n, {q: "X" for q in range(1, n + 1)}))
    if mode == NoDampingMode.PERTURBED:
        a = pattern_kraus(n, (), gamma).apply(v)
    else:
        a = v
    main, partner = branch_isometries(a, [z1.apply(a)])
    plus = branch_syndrome(
        "no_damping:+", 1 << code.k, measured + [(all_x, 1)],
        preserved=[str(z) for z in code.logical_z],
    )
    minus = branch_syndrome(
        "no_damping:-", 1 << code.k, measured + [(all_x, -1)], correction=str(z1),
        preserved=[str(z) for z in code.logical_z],
    )
    return [
        RecoveryElement.from_dense("no_damping:+", main.conj().T, plus),
        RecoveryElement.from_dense("no_damping:-", partner.conj().T, minus),
    ]


def pair_code_recovery(
    m: int,
    no_damping_mode: NoDampingMode = NoDampingMode.PROJECTION,
    gamma: Optional[float] = None,
    pivot: str = "lowest",
) -> RecoveryOperation:
    """Recovery for the standard-form [2(M+1), M] code.

    Args:
        m: Number of encoded qubits, 1 to 4.
        no_damping_mode: Treatment of the branch where no damping was seen.
        gamma: Damping probability, required for the perturbed mode.
        pivot: Which damped qubit receives the Hadamard, ``lowest`` or
            ``highest``; both give the same operation.

    Returns:
        RecoveryOperation: One element per damped syndrome and two for the
        no-damping branch.

    Raises:
        QECUsageError: If ``m`` is out of range.
        MissingGammaError: If the perturbed mode is asked for without gamma.
    """
    if not 1 <= m <= MAX_PAIR_M:
        raise QECUsageError(f"Pair code M must lie in 1..{MAX_PAIR_M}, got {m}")
    no_damping_mode = NoDampingMode(no_damping_mode)
    mode = RecoveryMode.PERTURBED if no_damping_mode == NoDampingMode.PERTURBED else RecoveryMode.PROJECTION
    gamma = require_gamma(mode, gamma)
    code = pair_code(m)
    n = code.n
    v = codewords(code)
    pairs = standard_pair_layout(m)

    elements = no_damping_elements(code, v, no_damping_mode, gamma, _measured(code, pairs, ()))
    for damped in damped_sets(m):
        chosen = _pivot(damped, pivot)
        image = undo_damping(v, n, damped, chosen)
        image[~syndrome_mask(n, pairs, damped)] = 0.0
        surviving = damped_subspace_set(code.group, damped)
        syndrome = branch_syndrome(
            damped_label(damped),
            dimension(surviving),
            _measured(code, pairs, damped),
            damped=damped,
            correction=f"H({chosen}) CX({chosen}->all) X(" + ",".join(str(q) for q in damped) + ")",
            preserved=[str(op) for op in preserved_logicals(code, damped)],
        )
        elements.append(RecoveryElement.from_dense(damped_label(damped), image.conj().T, syndrome))

    logger.debug("Built %d-element recovery for %s (%s)", len(elements), code.name, mode.value)
    return RecoveryOperation(
        rows=elements,
        code=code.name,
        n=n,
        k=code.k,
        mode=mode,
        gamma=gamma,
        metadata={"pivot": pivot, "no_damping_mode": no_damping_mode.value},
    )


__all__ = ["pair_code_recovery", "damped_sets", "syndrome_mask", "undo_damping", "no_damping_elements"]
