"""Amplitude damping quantum error correction toolkit."""

__version__ = "0.1.0"

from .client import SweepClient  # noqa: E402
from .config import QECConfig, config  # noqa: E402

__all__ = ["SweepClient", "QECConfig", "config", "__version__"]
