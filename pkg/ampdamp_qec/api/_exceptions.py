"""Exceptions for the amplitude damping code toolkit."""
from typing import Any, Dict, Optional


class QECError(Exception):
    """Base exception for all toolkit errors."""
    exit_code: int = 1

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        exit_code: Optional[int] = None,
    ):
        self.message = message
        self.details = details or {}
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(message)


class QECUsageError(QECError):
    """Raised when command-line input or a run configuration is invalid."""
    exit_code = 2

    def __init__(self, message: str = "Invalid usage"):
        super().__init__(message)


class UnknownCodeError(QECUsageError):
    """Raised when a code selector does not name a known code."""
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown code '{name}'")


class UnknownModeError(QECUsageError):
    """Raised when a recovery mode is not available for a code."""
    def __init__(self, mode: str, code: Optional[str] = None):
        self.mode = mode
        suffix = f" for code '{code}'" if code else ""
        super().__init__(f"Unknown recovery mode '{mode}'{suffix}")


class PauliError(QECError):
    """Raised for malformed Pauli strings or mismatched operands."""
    def __init__(self, message: str = "Invalid Pauli operator"):
        super().__init__(message)


class DimensionMismatchError(QECError):
    """Raised when operands have incompatible dimensions."""
    def __init__(self, message: str = "Dimension mismatch"):
        super().__init__(message)


class SizeGuardError(QECError):
    """Raised when a dense computation would exceed the qubit limit."""
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(
            f"{n} qubits exceeds the dense limit of {limit}",
            details={"n": n, "limit": limit},
        )


class InvalidGroupError(QECError):
    """Raised when generators do not form a valid stabilizer group."""
    def __init__(self, message: str = "Invalid stabilizer group"):
        super().__init__(message)


class InvalidCodeError(QECError):
    """Raised when logical operators are inconsistent with the group."""
    def __init__(self, message: str = "Invalid stabilizer code"):
        super().__init__(message)


class ParityCheckError(QECError):
    """Raised when a classical parity check cannot be converted."""
    def __init__(self, message: str = "Parity check matrix rejected"):
        super().__init__(message)


class AnnihilatedSubspaceError(QECError):
    """Raised when a damping maps the whole subspace to zero."""
    def __init__(self, qubit: int):
        self.qubit = qubit
        super().__init__(f"Damping qubit {qubit} annihilates the subspace")


class InvalidGammaError(QECUsageError):
    """Raised when a damping probability lies outside [0, 1]."""
    def __init__(self, gamma: float):
        self.gamma = gamma
        super().__init__(f"gamma must lie in [0, 1], got {gamma}")


class MissingGammaError(QECError):
    """Raised when a gamma-dependent recovery is requested without gamma."""
    exit_code = 2

    def __init__(self, mode: str):
        super().__init__(f"Recovery mode '{mode}' requires a gamma value")


class SyndromeCollisionError(QECError):
    """Raised when two single-qubit Paulis share a syndrome."""
    def __init__(self, first: str, second: str):
        super().__init__(f"Syndrome collision between {first} and {second}")


class CircuitError(QECError):
    """Raised for invalid circuits or unparseable circuit text."""
    def __init__(self, message: str = "Invalid circuit"):
        super().__init__(message)


class UnsupportedStageError(CircuitError):
    """Raised when a syndrome stage does not exist for a code."""
    def __init__(self, code: str, stage: str):
        super().__init__(f"Stage '{stage}' is not supported for code '{code}'")


__all__ = [
    "QECError",
    "QECUsageError",
    "UnknownCodeError",
    "UnknownModeError",
    "PauliError",
    "DimensionMismatchError",
    "SizeGuardError",
    "InvalidGroupError",
    "InvalidCodeError",
    "ParityCheckError",
    "AnnihilatedSubspaceError",
    "InvalidGammaError",
    "MissingGammaError",
    "SyndromeCollisionError",
    "CircuitError",
    "UnsupportedStageError",
]
