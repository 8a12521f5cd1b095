"""Recovery for the Shor [9,1] code against up to two dampings per block.

Each block of three qubits is classified by its two Z-pair outcomes and one
extra Z measurement on its first qubit: undamaged, one qubit damped or two
qubits damped. Blocks combine independently. What is left of each branch is
split either by the block-X generators that survive the damping (stabilizer
mode) or by the isometric part of the branch's Kraus image (gamma-dependent
mode).
"""
from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .._enums import RecoveryMode
from .._exceptions import UnknownModeError
from ..codes import shor_91
from ..damping import e1_product, pattern_kraus
from ..pauli import PauliOperator, commutes
from ..stabilizer import (
    StabilizerCode,
    codewords,
    damped_subspace_set,
    dimension,
    preserved_logicals,
)
from ._base import (
    RecoveryElement,
    RecoveryOperation,
    branch_isometries,
    branch_syndrome,
    damped_label,
    require_gamma,
)

logger = logging.getLogger(__name__)

SHOR_MODES = (RecoveryMode.STABILIZER, RecoveryMode.GAMMA_DEPENDENT)
BLOCKS = ((1, 2, 3), (4, 5, 6), (7, 8, 9))


def block_options(block: Sequence[int]) -> List[Tuple[int, ...]]:
    """Damped subsets of one block with at most two qubits, undamaged first."""
    options: List[Tuple[int, ...]] = [()]
    options += [(q,) for q in block]
    options += [pair for pair in itertools.combinations(block, 2)]
    return options


def shor_damped_sets() -> List[Tuple[int, ...]]:
    """All 7^3 combinations of per-block damped subsets."""
    return [
        tuple(sorted(a + b + c))
        for a, b, c in itertools.product(*(block_options(block) for block in BLOCKS))
    ]


def _measured(n: int, damped: Sequence[int]) -> List[Tuple[str, int]]:
    measured = []
    for block in BLOCKS:
        for a, b in zip(block, block[1:]):
            outcome = -1 if (a in damped) != (b in damped) else 1
            measured.append((str(PauliOperator.from_sites(n, {a: "Z", b: "Z"})), outcome))
    for block in BLOCKS:
        if any(q in damped for q in block):
            first = block[0]
            measured.append((str(PauliOperator.single(n, first, "Z")), 1 if first in damped else -1))
    return measured


def _partner_corrections(x_generators: Sequence[PauliOperator], n: int) -> List[Tuple[str, PauliOperator]]:
    """For every nonzero outcome pattern of the X-type generators, the lowest Z_q producing it."""
    corrections = []
    for pattern in itertools.product((0, 1), repeat=len(x_generators)):
        if not any(pattern):
            continue
        for q in range(1, n + 1):
            z_q = PauliOperator.single(n, q, "Z")
            flips = tuple(0 if commutes(z_q, g) else 1 for g in x_generators)
            if flips == pattern:
                suffix = "".join("-" if bit else "+" for bit in pattern)
                corrections.append((suffix, z_q))
                break
    return corrections


def shor_recovery(
    mode: RecoveryMode = RecoveryMode.STABILIZER,
    gamma: Optional[float] = None,
    code: Optional[StabilizerCode] = None,
) -> RecoveryOperation:
    """Recovery of the Shor code for every pattern of at most two dampings per block.

    Args:
        mode: ``stabilizer`` or ``gamma_dependent``.
        gamma: Damping probability, required for ``gamma_dependent``.
        code: Alternative logical operator choice for the same stabilizer.

    Raises:
        UnknownModeError: For other modes.
        MissingGammaError: If ``gamma_dependent`` lacks gamma.
    """
    mode = RecoveryMode(mode)
    if mode not in SHOR_MODES:
        raise UnknownModeError(mode.value, "shor91")
    gamma = require_gamma(mode, gamma)
    code = code or shor_91()
    n = code.n
    v = codewords(code)

    elements: List[RecoveryElement] = []
    for damped in shor_damped_sets():
        surviving = damped_subspace_set(code.group, damped)
        x_generators = [g for g in surviving if g.x]
        lowered = np.asarray(e1_product(n, damped) @ v)
        main = lowered
        if mode == RecoveryMode.GAMMA_DEPENDENT:
            image = pattern_kraus(n, damped, gamma).apply(v)
            if np.any(np.abs(image) > 0):
                main = image
        corrections = _partner_corrections(x_generators, n)
        isometries = branch_isometries(main, [z.apply(main) for _, z in corrections])

        base = damped_label(damped) if damped else "no_damping"
        measured = _measured(n, damped)
        preserved = [str(op) for op in preserved_logicals(code, damped)]
        main_suffix = "+" * len(x_generators)
        labels = [(main_suffix, "")] + [(suffix, str(z)) for suffix, z in corrections]
        for (suffix, correction), isometry in zip(labels, isometries):
            label = f"{base}:{suffix}" if suffix else base
            outcomes = [
                (str(g), -1 if bit == "-" else 1) for g, bit in zip(x_generators, suffix)
            ]
            syndrome = branch_syndrome(
                label,
                dimension(surviving),
                measured + outcomes,
                damped=damped,
                correction=correction,
                preserved=preserved,
            )
            elements.append(RecoveryElement.from_dense(label, isometry.conj().T, syndrome))

    logger.debug("Built %d-element Shor recovery (%s)", len(elements), mode.value)
    return RecoveryOperation(
        rows=elements,
        code=code.name,
        n=n,
        k=code.k,
        mode=mode,
        gamma=gamma,
        metadata={"collapse_convention": "undamaged_block", "branches": len(shor_damped_sets())},
    )


__all__ = ["shor_recovery", "shor_damped_sets", "block_options", "SHOR_MODES"]
