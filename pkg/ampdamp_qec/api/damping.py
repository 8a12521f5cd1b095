"""Amplitude Damping Channel.

This module provides the Kraus operators of the n-qubit amplitude damping
channel, one sparse matrix per damping pattern, with exact enumeration or
truncation by the number of dampings and a certificate for the weight left
out.
"""
from __future__ import annotations

import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field
from scipy import sparse
from scipy.stats import binom

from ..config import config
from ._base import ArrayModel, TableResult
from ._exceptions import DimensionMismatchError, InvalidGammaError, SizeGuardError

logger = logging.getLogger(__name__)


def _check_gamma(gamma: float) -> float:
    if not 0.0 <= gamma <= 1.0:
        raise InvalidGammaError(gamma)
    return float(gamma)


def single_qubit_kraus(gamma: float) -> Tuple[np.ndarray, np.ndarray]:
    """E_0 = diag(1, sqrt(1-gamma)) and E_1 = sqrt(gamma)|0><1|."""
    gamma = _check_gamma(gamma)
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    e1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return e0, e1


def _mask(n: int, qubits: Iterable[int]) -> int:
    mask = 0
    for q in qubits:
        if not 1 <= q <= n:
            raise DimensionMismatchError(f"Qubit {q} out of range 1..{n}")
        mask |= 1 << (n - q)
    return mask


def _popcounts(values: np.ndarray) -> np.ndarray:
    counts = np.zeros(values.shape, dtype=np.int64)
    rest = values.copy()
    while np.any(rest):
        counts += rest & 1
        rest >>= 1
    return counts


class DampingKraus(ArrayModel):
    """The Kraus operator of one damping pattern.

    Column ``c`` maps to row ``c`` with the damped bits cleared. It is zero
    when ``c`` has a 0 at a damped qubit.
    """
    n: int = Field(..., ge=1)
    pattern: Tuple[int, ...] = Field(..., description="1 where E_1 acts, 0 where E_0 acts")
    gamma: float = Field(..., ge=0, le=1)
    rows: np.ndarray = Field(..., description="Row index of the entry in each column")
    values: np.ndarray = Field(..., description="Entry of each column, zero when annihilated")

    @property
    def mask(self) -> int:
        return _mask(self.n, self.damped)

    @property
    def damped(self) -> Tuple[int, ...]:
        return tuple(q for q, bit in enumerate(self.pattern, start=1) if bit)

    @property
    def order(self) -> int:
        return sum(self.pattern)

    @property
    def matrix(self) -> sparse.csr_matrix:
        dim = 1 << self.n
        return sparse.csr_matrix(
            (self.values, (self.rows, np.arange(dim))), shape=(dim, dim)
        )

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def apply(self, states: np.ndarray) -> np.ndarray:
        """Apply to a state vector or to the columns of a matrix."""
        return apply_kraus(self, states)


def pattern_kraus(n: int, damped: Iterable[int], gamma: float) -> DampingKraus:
    """Kraus operator with E_1 on the ``damped`` qubits and E_0 elsewhere."""
    gamma = _check_gamma(gamma)
    if n > config.dense_qubit_limit:
        raise SizeGuardError(n, config.dense_qubit_limit)
    damped = tuple(sorted(set(damped)))
    mask = _mask(n, damped)
    columns = np.arange(1 << n, dtype=np.int64)
    survivors = (columns & mask) == mask
    excited = _popcounts(columns & ~mask)
    values = np.where(
        survivors,
        np.sqrt(gamma) ** len(damped) * np.sqrt(1.0 - gamma) ** excited,
        0.0,
    ).astype(complex)
    pattern = tuple(1 if q in damped else 0 for q in range(1, n + 1))
    return DampingKraus(n=n, pattern=pattern, gamma=gamma, rows=columns & ~mask, values=values)


class DampingChannel(TableResult[DampingKraus]):
    """Kraus operators of the n-qubit channel, sorted by damping order."""
    n: int
    gamma: float
    max_order: Optional[int] = Field(None, description="None when every pattern is kept")
    discarded_weight: float = Field(0.0, ge=0, description="1 - sum tr(K^dag K rho), rho = I/2^n")

    @property
    def operators(self) -> List[DampingKraus]:
        return self.rows

    def completeness(self) -> np.ndarray:
        """Dense sum of K^dag K over the kept operators."""
        dim = 1 << self.n
        total = sparse.csr_matrix((dim, dim), dtype=complex)
        for kraus in self.rows:
            matrix = kraus.matrix
            total = total + matrix.conj().T @ matrix
        return total.toarray()


def discarded_weight(n: int, gamma: float, max_order: Optional[int]) -> float:
    """Weight of the patterns with more than ``max_order`` dampings for rho = I/2^n."""
    if max_order is None or max_order >= n:
        return 0.0
    return float(binom.sf(max_order, n, gamma / 2.0))


def enumerate_kraus(n: int, gamma: float, max_order: Optional[int] = None) -> DampingChannel:
    """All damping patterns with at most ``max_order`` dampings.

    Patterns are sorted by the number of dampings and then by the ascending
    tuple of damped qubits.

    Raises:
        SizeGuardError: If ``n`` exceeds ``config.dense_qubit_limit``.
        InvalidGammaError: If ``gamma`` lies outside [0, 1].
    """
    gamma = _check_gamma(gamma)
    if n > config.dense_qubit_limit:
        raise SizeGuardError(n, config.dense_qubit_limit)
    top = n if max_order is None else min(max_order, n)
    operators = [
        pattern_kraus(n, damped, gamma)
        for order in range(top + 1)
        for damped in itertools.combinations(range(1, n + 1), order)
    ]
    bound = discarded_weight(n, gamma, max_order)
    logger.debug(
        "Damping channel n=%d gamma=%g: %d operators, discarded %.3e",
        n, gamma, len(operators), bound,
    )
    return DampingChannel(
        rows=operators, n=n, gamma=gamma, max_order=max_order, discarded_weight=bound
    )


def apply_kraus(kraus: DampingKraus, states: np.ndarray) -> np.ndarray:
    """Sparse action of a pattern operator on a vector or matrix of columns."""
    states = np.asarray(states)
    dim = 1 << kraus.n
    if states.shape[0] != dim:
        raise DimensionMismatchError(f"State has {states.shape[0]} rows, expected {dim}")
    out = np.zeros(states.shape, dtype=complex)
    if states.ndim == 1:
        np.add.at(out, kraus.rows, kraus.values * states)
    else:
        np.add.at(out, kraus.rows, kraus.values[:, None] * states)
    return out


def e1_product(n: int, damped: Iterable[int], gamma: float = 1.0) -> sparse.csr_matrix:
    """E_1 on every ``damped`` qubit and identity elsewhere.

    With the default ``gamma = 1`` this is the product of lowering operators
    (X + iY)/2, which carries no gamma dependence.
    """
    gamma = _check_gamma(gamma)
    damped = tuple(sorted(set(damped)))
    dim = 1 << n
    columns = np.arange(dim, dtype=np.int64)
    mask = _mask(n, damped)
    values = np.where((columns & mask) == mask, np.sqrt(gamma) ** len(damped), 0.0)
    return sparse.csr_matrix(
        (values.astype(complex), (columns & ~mask, columns)), shape=(dim, dim)
    )


def damping_error_products(
    n: int, gamma: float, max_order: int
) -> List[sparse.csr_matrix]:
    """Products of E_1 factors on up to ``max_order`` qubits, identity elsewhere.

    The first entry is the identity. These are the error sets of the
    Knill-Laflamme checks.
    """
    return [
        e1_product(n, damped, gamma)
        for order in range(max_order + 1)
        for damped in itertools.combinations(range(1, n + 1), order)
    ]


def kron_kraus(n: int, damped: Sequence[int], gamma: float) -> np.ndarray:
    """Dense Kronecker product of single-qubit factors, a cross-check for pattern_kraus."""
    e0, e1 = single_qubit_kraus(gamma)
    result = np.ones((1, 1), dtype=complex)
    for q in range(1, n + 1):
        result = np.kron(result, e1 if q in damped else e0)
    return result


__all__ = [
    "single_qubit_kraus",
    "DampingKraus",
    "DampingChannel",
    "pattern_kraus",
    "enumerate_kraus",
    "discarded_weight",
    "apply_kraus",
    "e1_product",
    "damping_error_products",
    "kron_kraus",
]
