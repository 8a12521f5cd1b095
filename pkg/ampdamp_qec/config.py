from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class QECConfig(BaseSettings):
    """Configuration for the amplitude damping code toolkit.

    Loads configuration from environment variables with the prefix 'QEC_'.
    """
    model_config = SettingsConfigDict(env_prefix="QEC_", extra="ignore")

    # Numerical tolerances
    kl_tolerance: float = Field(1e-9, gt=0, description="Default Knill-Laflamme tolerance")
    oracle_tolerance: float = Field(
        1e-10, gt=0, description="Tolerance for dense cross-checks and completeness deficits"
    )
    rank_tolerance: float = Field(
        1e-12, gt=0, description="Singular values below this are treated as zero"
    )

    # Size guards and truncation
    dense_qubit_limit: int = Field(12, ge=1, le=14, description="Largest n for dense matrices")
    exact_max_qubits: int = Field(
        8, ge=1, description="Codes up to this length use the untruncated channel by default"
    )
    large_truncation_order: int = Field(
        4, ge=0, description="Default damping order kept for longer codes"
    )

    # Sweeps
    max_workers: int = Field(4, ge=1, description="Concurrent gamma points in a sweep")
    sweep_grid_step: float = Field(1e-4, gt=0, description="Grid step of the alpha sweep")
    truncation_warn_bound: float = Field(
        1e-4, gt=0, description="Truncation bounds above this are logged as warnings"
    )

    # Output
    significant_digits: int = Field(12, ge=1, le=17, description="Digits kept in CSV numbers")

    # Logging and debugging
    log_level: str = Field("WARNING", description="Logging level")
    debug: bool = Field(False, description="Enable debug logging")

    @property
    def effective_log_level(self) -> str:
        """Log level after applying the debug switch."""
        return "DEBUG" if self.debug else self.log_level.upper()

    def default_truncation(self, n: int):
        """Damping order kept for an n-qubit code, or None for the full channel."""
        return None if n <= self.exact_max_qubits else self.large_truncation_order


# Create a singleton instance
config = QECConfig()

__all__ = ["config", "QECConfig"]
