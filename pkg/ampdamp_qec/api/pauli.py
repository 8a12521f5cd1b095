"""Pauli Operator Algebra.

This module provides phase-tracked n-qubit Pauli operators in the symplectic
(X bits, Z bits) representation, their products, commutation tests, text form
and dense or permutation-style action on state vectors.

Bits are packed into Python ints. Qubit ``q`` (1-based) is bit ``1 << (n - q)``
so that qubit 1 is the most significant bit, which matches Kronecker order and
the computational basis index of a state vector.
"""
from __future__ import annotations

import itertools
import re
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field, model_validator

from ..config import config
from ._base import FrozenModel
from ._exceptions import DimensionMismatchError, PauliError, SizeGuardError

MAX_QUBITS = 64

_TEXT_RE = re.compile(r"^([+-]?)(i?)([IXYZ]+)$")
_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}


def _popcount(value: int) -> int:
    return bin(value).count("1")


def _parity_array(values: np.ndarray) -> np.ndarray:
    """Parity of the set bits of every entry of a non-negative int array."""
    parity = np.zeros(values.shape, dtype=np.int64)
    rest = values.astype(np.int64, copy=True)
    while np.any(rest):
        parity ^= rest & 1
        rest >>= 1
    return parity


class PauliOperator(FrozenModel):
    """An n-qubit Pauli ``i^phase_exp * (sigma_1 x ... x sigma_n)``."""
    n: int = Field(..., ge=1, le=MAX_QUBITS, description="Number of qubits")
    x: int = Field(0, ge=0, description="Packed X bits, qubit 1 is the most significant bit")
    z: int = Field(0, ge=0, description="Packed Z bits, qubit 1 is the most significant bit")
    phase_exp: int = Field(0, ge=0, le=3, description="Phase exponent e of i^e")

    @model_validator(mode="after")
    def _check_bits(self) -> "PauliOperator":
        if self.x >> self.n or self.z >> self.n:
            raise ValueError(f"bit vectors exceed {self.n} qubits")
        return self

    @classmethod
    def _make(cls, n: int, x: int, z: int, phase_exp: int = 0) -> "PauliOperator":
        # Internal constructor for values already known to be valid.
        return cls.model_construct(n=n, x=x, z=z, phase_exp=phase_exp % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n=n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        """The Pauli ``letter`` on a single 1-based ``qubit``, identity elsewhere."""
        return cls.from_sites(n, {qubit: letter})

    @classmethod
    def from_sites(cls, n: int, sites: Dict[int, str], phase_exp: int = 0) -> "PauliOperator":
        """Build a Pauli from a mapping of 1-based qubit to letter."""
        x = z = 0
        for qubit, letter in sites.items():
            if not 1 <= qubit <= n:
                raise PauliError(f"Qubit {qubit} out of range 1..{n}")
            if letter not in _LETTER_BITS:
                raise PauliError(f"Bad Pauli letter '{letter}'")
            bx, bz = _LETTER_BITS[letter]
            bit = 1 << (n - qubit)
            x |= bit if bx else 0
            z |= bit if bz else 0
        return cls(n=n, x=x, z=z, phase_exp=phase_exp % 4)

    # Views

    @property
    def x_bits(self) -> Tuple[int, ...]:
        return tuple((self.x >> (self.n - q)) & 1 for q in range(1, self.n + 1))

    @property
    def z_bits(self) -> Tuple[int, ...]:
        return tuple((self.z >> (self.n - q)) & 1 for q in range(1, self.n + 1))

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exp]

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def support(self) -> Tuple[int, ...]:
        """1-based qubits carrying a non-identity factor."""
        mask = self.x | self.z
        return tuple(q for q in range(1, self.n + 1) if (mask >> (self.n - q)) & 1)

    def letter(self, qubit: int) -> str:
        shift = self.n - qubit
        return _BITS_LETTER[((self.x >> shift) & 1, (self.z >> shift) & 1)]

    def unsigned(self) -> "PauliOperator":
        return PauliOperator._make(self.n, self.x, self.z, 0)

    def same_letters(self, other: "PauliOperator") -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    # Algebra

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator._make(self.n, self.x, self.z, self.phase_exp + 2)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOperator('{format_pauli(self)}')"

    # Action on states

    def basis_action(self) -> Tuple[np.ndarray, np.ndarray]:
        """Rows and amplitudes of the permutation action on basis states.

        Column ``b`` of the dense matrix has its single nonzero entry
        ``values[b]`` at row ``rows[b]``.
        """
        _guard(self.n)
        idx = np.arange(1 << self.n, dtype=np.int64)
        base = self.phase * (1j ** (_popcount(self.x & self.z) % 4))
        signs = 1 - 2 * _parity_array(idx & self.z)
        return idx ^ self.x, base * signs

    def apply(self, states: np.ndarray) -> np.ndarray:
        """Apply the operator to a state vector or to the columns of a matrix."""
        states = np.asarray(states)
        if states.shape[0] != 1 << self.n:
            raise DimensionMismatchError(
                f"State has {states.shape[0]} rows, expected {1 << self.n}"
            )
        rows, values = self.basis_action()
        out = np.empty(states.shape, dtype=complex)
        if states.ndim == 1:
            out[rows] = values * states
        else:
            out[rows] = values[:, None] * states
        return out


def _guard(n: int) -> None:
    if n > config.dense_qubit_limit:
        raise SizeGuardError(n, config.dense_qubit_limit)


def _check_same_n(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise PauliError(f"Qubit count mismatch: {a.n} vs {b.n}")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product ``a * b`` with the phase of the dense matrix product."""
    _check_same_n(a, b)
    x, z = a.x ^ b.x, a.z ^ b.z
    e = (
        a.phase_exp
        + b.phase_exp
        + _popcount(a.x & a.z)
        + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x & z)
    )
    return PauliOperator._make(a.n, x, z, e)


def product(paulis: Iterable[PauliOperator], n: int) -> PauliOperator:
    """Ordered product of a sequence of Paulis, identity when empty."""
    result = PauliOperator.identity(n)
    for pauli in paulis:
        result = multiply(result, pauli)
    return result


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    _check_same_n(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) & 1


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic inner product of ``a`` and ``b`` vanishes."""
    return symplectic_product(a, b) == 0


def to_dense(a: PauliOperator) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of the operator including its phase."""
    rows, values = a.basis_action()
    dim = 1 << a.n
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[rows, np.arange(dim)] = values
    return matrix


def symplectic_matrix(paulis: Sequence[PauliOperator], n: int) -> np.ndarray:
    """Binary matrix with one row ``(x_1..x_n | z_1..z_n)`` per Pauli."""
    matrix = np.zeros((len(paulis), 2 * n), dtype=np.uint8)
    for row, pauli in enumerate(paulis):
        matrix[row, :n] = pauli.x_bits
        matrix[row, n:] = pauli.z_bits
    return matrix


def parse(text: str, n: Optional[int] = None) -> PauliOperator:
    """Parse a signed Pauli string such as ``-ZZII`` or ``+iXY``.

    Args:
        text: Optional sign and ``i`` prefix followed by letters from IXYZ.
        n: Expected number of qubits, checked when given.

    Returns:
        PauliOperator: The parsed operator.

    Raises:
        PauliError: On a bad character or a length mismatch.
    """
    match = _TEXT_RE.match(text.strip())
    if match is None:
        raise PauliError(f"Cannot parse Pauli string '{text}'")
    sign, imag, letters = match.groups()
    if n is not None and len(letters) != n:
        raise PauliError(f"Pauli string '{text}' has {len(letters)} qubits, expected {n}")
    e = (2 if sign == "-" else 0) + (1 if imag else 0)
    return PauliOperator.from_sites(
        len(letters), {q: letter for q, letter in enumerate(letters, start=1)}, e
    )


def format_pauli(a: PauliOperator) -> str:
    """Text form; ``+1`` carries no prefix, ``-1`` is ``-`` and ``+-i`` is ``+i``/``-i``."""
    letters = "".join(a.letter(q) for q in range(1, a.n + 1))
    return _PREFIX[a.phase_exp] + letters


def iter_by_weight(
    n: int, alphabet: str = "IZXY", max_weight: Optional[int] = None
) -> Iterator[PauliOperator]:
    """Enumerate unsigned non-identity Paulis by weight, then lexicographically.

    The order of letters in ``alphabet`` (which must start with ``I``) is the
    lexicographic order used to break ties between Paulis of equal weight.
    """
    if sorted(alphabet) != sorted("IXYZ") or alphabet[0] != "I":
        raise PauliError(f"Alphabet '{alphabet}' must be a permutation of IXYZ starting with I")
    letters = alphabet[1:]
    top = n if max_weight is None else min(n, max_weight)
    for weight in range(1, top + 1):
        candidates = []
        for sites in itertools.combinations(range(1, n + 1), weight):
            for choice in itertools.product(letters, repeat=weight):
                word = ["I"] * n
                for qubit, letter in zip(sites, choice):
                    word[qubit - 1] = letter
                candidates.append("".join(word))
        candidates.sort(key=lambda word: [alphabet.index(c) for c in word])
        for word in candidates:
            yield parse(word, n)


__all__ = [
    "PauliOperator",
    "multiply",
    "product",
    "commutes",
    "symplectic_product",
    "symplectic_matrix",
    "to_dense",
    "parse",
    "format_pauli",
    "iter_by_weight",
]
