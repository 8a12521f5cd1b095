"""Recovery builders for every code family, and a registry keyed by code name."""
from __future__ import annotations

from typing import Callable, Dict, Optional, Tuple

from .._enums import NoDampingMode, RecoveryMode
from .._exceptions import UnknownCodeError, UnknownModeError
from ..codes import gottesman_83, parse_selector
from ._base import RecoveryElement, RecoveryOperation, polar_isometry, branch_isometries
from .generic import generic_stabilizer_recovery, single_qubit_table, syndrome_of
from .hamming import hamming73_recovery, parity_code_recovery
from .leung import LEUNG_MODES, leung41_recovery, perturbed_alpha, sweep_alpha
from .pair import pair_code_recovery
from .shor import SHOR_MODES, shor_damped_sets, shor_recovery

Builder = Callable[[RecoveryMode, Optional[float]], RecoveryOperation]

_NO_DAMPING_MODES = (RecoveryMode.PROJECTION, RecoveryMode.PERTURBED)
_GENERIC_MODES = (RecoveryMode.GENERIC_STABILIZER, RecoveryMode.ADAPTED_STABILIZER)


def _pair_builder(m: int) -> Builder:
    def build(mode: RecoveryMode, gamma: Optional[float]) -> RecoveryOperation:
        return pair_code_recovery(m, NoDampingMode(mode.value), gamma)
    return build


def _hamming(mode: RecoveryMode, gamma: Optional[float]) -> RecoveryOperation:
    return hamming73_recovery(NoDampingMode(mode.value), gamma)


def _gottesman(mode: RecoveryMode, gamma: Optional[float]) -> RecoveryOperation:
    return generic_stabilizer_recovery(
        gottesman_83(), adapted=mode == RecoveryMode.ADAPTED_STABILIZER
    )


# code name -> (supported modes, default mode, builder)
RECOVERY_REGISTRY: Dict[str, Tuple[Tuple[RecoveryMode, ...], RecoveryMode, Builder]] = {
    "leung41": (LEUNG_MODES, RecoveryMode.PROJECTION, leung41_recovery),
    **{
        f"pair:{m}": (_NO_DAMPING_MODES, RecoveryMode.PROJECTION, _pair_builder(m))
        for m in range(1, 5)
    },
    "hamming73": (_NO_DAMPING_MODES, RecoveryMode.PROJECTION, _hamming),
    "gottesman83": (_GENERIC_MODES, RecoveryMode.GENERIC_STABILIZER, _gottesman),
    "shor91": (SHOR_MODES, RecoveryMode.STABILIZER, shor_recovery),
}


def supported_modes(code_name: str) -> Tuple[RecoveryMode, ...]:
    """Modes accepted for a registry code.

    Raises:
        UnknownCodeError: If the code has no recovery builder.
    """
    name, _ = parse_selector(code_name)
    if name not in RECOVERY_REGISTRY:
        raise UnknownCodeError(code_name)
    return RECOVERY_REGISTRY[name][0]


def default_mode(code_name: str) -> RecoveryMode:
    name, _ = parse_selector(code_name)
    if name not in RECOVERY_REGISTRY:
        raise UnknownCodeError(code_name)
    return RECOVERY_REGISTRY[name][1]


def check_mode(code_name: str, mode: Optional[str]) -> RecoveryMode:
    """Resolve ``mode`` for a code before any computation starts.

    Raises:
        UnknownCodeError: If the code has no recovery builder.
        UnknownModeError: If the mode is not a known mode or not one the code supports.
    """
    if mode is None:
        return default_mode(code_name)
    try:
        resolved = RecoveryMode(mode)
    except ValueError:
        raise UnknownModeError(mode, code_name)
    if resolved not in supported_modes(code_name):
        raise UnknownModeError(resolved.value, code_name)
    return resolved


def build_recovery(
    code_name: str, mode: Optional[str] = None, gamma: Optional[float] = None
) -> RecoveryOperation:
    """Build the recovery of a registry code, e.g. ``build_recovery("pair:2", "perturbed", 0.1)``.

    A selector with copies (``leung41^2``) builds the single-block recovery.
    """
    resolved = check_mode(code_name, mode)
    name, _ = parse_selector(code_name)
    _, _, builder = RECOVERY_REGISTRY[name]
    return builder(resolved, gamma if resolved.needs_gamma else None)


__all__ = [
    "RecoveryElement",
    "RecoveryOperation",
    "polar_isometry",
    "branch_isometries",
    "RECOVERY_REGISTRY",
    "supported_modes",
    "default_mode",
    "check_mode",
    "build_recovery",
    "pair_code_recovery",
    "leung41_recovery",
    "hamming73_recovery",
    "parity_code_recovery",
    "shor_recovery",
    "generic_stabilizer_recovery",
    "single_qubit_table",
    "syndrome_of",
    "perturbed_alpha",
    "sweep_alpha",
    "shor_damped_sets",
]
