"""Enumerations shared across the toolkit."""
from enum import Enum


class RecoveryMode(str, Enum):
    """How a recovery operation treats the branches it cannot fix exactly."""
    PROJECTION = "projection"
    PERTURBED = "perturbed"
    SWEEP_OPTIMIZED = "sweep_optimized"
    GENERIC_STABILIZER = "generic_stabilizer"
    ADAPTED_STABILIZER = "adapted_stabilizer"
    STABILIZER = "stabilizer"
    GAMMA_DEPENDENT = "gamma_dependent"

    @property
    def needs_gamma(self) -> bool:
        return self in GAMMA_MODES


GAMMA_MODES = frozenset(
    {RecoveryMode.PERTURBED, RecoveryMode.SWEEP_OPTIMIZED, RecoveryMode.GAMMA_DEPENDENT}
)


class NoDampingMode(str, Enum):
    """Treatment of the all-Z-pairs-+1 syndrome."""
    PROJECTION = "projection"
    PERTURBED = "perturbed"


class GammaSpacing(str, Enum):
    """Spacing of a gamma grid."""
    LINEAR = "linear"
    LOG = "log"


class SyndromeStage(str, Enum):
    """Syndrome extraction stages that have a circuit."""
    Z_PAIRS = "z_pairs"
    NO_DAMPING_X = "no_damping_x"
    PER_PAIR_Z = "per_pair_z"
    HAMMING_BITS = "hamming_bits"


class CircuitKind(str, Enum):
    """Circuits the CLI can emit."""
    ENCODE = "encode"
    SYNDROME = "syndrome"
    RECOVERY = "recovery"


class OutputFormat(str, Enum):
    """Tabular output formats."""
    CSV = "csv"
    JSON = "json"


__all__ = [
    "RecoveryMode",
    "GAMMA_MODES",
    "NoDampingMode",
    "GammaSpacing",
    "SyndromeStage",
    "CircuitKind",
    "OutputFormat",
]
