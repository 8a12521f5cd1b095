"""Syndrome-table recovery for codes that correct any single-qubit Pauli."""
from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .._enums import RecoveryMode
from .._exceptions import SyndromeCollisionError
from ..pauli import PauliOperator, commutes
from ..stabilizer import StabilizerCode, codewords
from ._base import RecoveryElement, RecoveryOperation, branch_syndrome

logger = logging.getLogger(__name__)


def syndrome_of(code: StabilizerCode, error: PauliOperator) -> int:
    """Syndrome bits, generator 1 in the most significant position; 1 means anticommuting."""
    value = 0
    for g in code.group:
        value = (value << 1) | (0 if commutes(g, error) else 1)
    return value


def _syndrome_bits(code: StabilizerCode, syndrome: int) -> List[Tuple[str, int]]:
    r = code.group.rank
    return [
        (str(g), -1 if (syndrome >> (r - 1 - i)) & 1 else 1)
        for i, g in enumerate(code.group)
    ]


def single_qubit_table(code: StabilizerCode) -> Dict[int, PauliOperator]:
    """Syndrome to correction for the identity and every single-qubit Pauli.

    Raises:
        SyndromeCollisionError: If two of these operators share a syndrome.
    """
    n = code.n
    table: Dict[int, PauliOperator] = {0: PauliOperator.identity(n)}
    for qubit in range(1, n + 1):
        for letter in "XYZ":
            error = PauliOperator.single(n, qubit, letter)
            syndrome = syndrome_of(code, error)
            if syndrome in table:
                raise SyndromeCollisionError(str(table[syndrome]), str(error))
            table[syndrome] = error
    return table


def damping_pair_candidates(n: int) -> Iterator[PauliOperator]:
    """Two-qubit X/Y products in order of qubit pair, then letters with X before Y."""
    for i, j in itertools.combinations(range(1, n + 1), 2):
        for a, b in itertools.product("XY", repeat=2):
            yield PauliOperator.from_sites(n, {i: a, j: b})


def generic_stabilizer_recovery(
    code: StabilizerCode, adapted: bool = False
) -> RecoveryOperation:
    """Full syndrome-table recovery over all 2^(n-k) outcomes.

    Single-qubit Paulis are corrected exactly. Syndromes left over are either
    given the identity correction, whose element is the zero map since the
    code space carries no such syndrome, or, when ``adapted``, the first
    two-qubit X/Y product with that syndrome, the most likely cause under
    amplitude damping.
    """
    table = single_qubit_table(code)
    assigned = len(table)
    if adapted:
        for candidate in damping_pair_candidates(code.n):
            syndrome = syndrome_of(code, candidate)
            if syndrome not in table:
                table[syndrome] = candidate
            if len(table) == 1 << code.group.rank:
                break

    v = codewords(code)
    elements: List[RecoveryElement] = []
    for syndrome in range(1 << code.group.rank):
        correction: Optional[PauliOperator] = table.get(syndrome)
        bits = format(syndrome, f"0{code.group.rank}b")
        label = f"syndrome:{bits}"
        if correction is None:
            matrix = np.zeros((v.shape[1], v.shape[0]), dtype=complex)
            text = "I"
        else:
            matrix = correction.apply(v).conj().T
            text = str(correction)
        damped = () if correction is None else tuple(
            q for q in correction.support if correction.letter(q) in "XY"
        )
        outcome = branch_syndrome(
            label,
            0 if correction is None else 1 << code.k,
            _syndrome_bits(code, syndrome),
            damped=damped,
            correction=text,
        )
        elements.append(RecoveryElement.from_dense(label, matrix, outcome))

    mode = RecoveryMode.ADAPTED_STABILIZER if adapted else RecoveryMode.GENERIC_STABILIZER
    logger.debug(
        "Syndrome table for %s: %d single-qubit syndromes, %d total assigned",
        code.name, assigned, len(table),
    )
    return RecoveryOperation(
        rows=elements,
        code=code.name,
        n=code.n,
        k=code.k,
        mode=mode,
        metadata={"single_qubit_syndromes": assigned, "assigned_syndromes": len(table)},
    )


__all__ = [
    "generic_stabilizer_recovery",
    "syndrome_of",
    "single_qubit_table",
    "damping_pair_candidates",
]
