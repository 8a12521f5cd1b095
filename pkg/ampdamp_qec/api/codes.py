"""Code Library.

This module provides constructors for the amplitude damping codes: the [4,1]
code, the [2(M+1), M] pair family, the [7,3] Hamming-derived code, the
Gottesman [8,3] code, the Shor [9,1] code and the general conversion of a
classical single-error-correcting parity check into a quantum code.
"""
from __future__ import annotations

import functools
import logging
import re
from typing import Callable, Dict, List, Tuple

from pydantic import Field, ValidationError, field_validator

from ._base import FrozenModel
from ._exceptions import ParityCheckError, QECUsageError, UnknownCodeError
from .pauli import PauliOperator, parse
from .stabilizer import (
    StabilizerCode,
    StabilizerGroup,
    gf2_rank,
    logical_completion,
    permute_qubits,
    standard_pair_layout,
)

logger = logging.getLogger(__name__)

MAX_PAIR_M = 4


class ParityCheckMatrix(FrozenModel):
    """Parity check matrix of a classical binary code."""
    rows: Tuple[Tuple[int, ...], ...] = Field(..., min_length=1, description="Rows of 0/1 entries")

    @field_validator("rows")
    @classmethod
    def _check_rows(cls, rows: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[int, ...], ...]:
        width = len(rows[0])
        if width == 0:
            raise ValueError("rows must not be empty")
        for row in rows:
            if len(row) != width:
                raise ValueError("rows have different lengths")
            if any(bit not in (0, 1) for bit in row):
                raise ValueError("entries must be 0 or 1")
        return rows

    @classmethod
    def from_text(cls, text: str) -> "ParityCheckMatrix":
        """Parse rows of whitespace separated 0/1 entries, one row per line."""
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) == 1 and len(tokens[0]) > 1:
                tokens = list(tokens[0])
            try:
                rows.append(tuple(int(token) for token in tokens))
            except ValueError as e:
                raise ParityCheckError(f"Bad parity check entry in line '{line}'") from e
        try:
            return cls(rows=tuple(rows))
        except ValidationError as e:
            raise ParityCheckError(str(e.errors()[0]["msg"])) from e

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def r(self) -> int:
        return len(self.rows)

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(row[c] for row in self.rows) for c in range(self.n)]


def _all_x(n: int) -> PauliOperator:
    return PauliOperator.from_sites(n, {q: "X" for q in range(1, n + 1)})


def _z_pair(n: int, a: int, b: int) -> PauliOperator:
    return PauliOperator.from_sites(n, {a: "Z", b: "Z"})


def _completed(name: str, group: StabilizerGroup, alphabet: str = "IZXY") -> StabilizerCode:
    logical_x, logical_z = logical_completion(group, alphabet)
    return StabilizerCode.of(name, group, logical_x, logical_z)


@functools.lru_cache(maxsize=None)
def leung_41() -> StabilizerCode:
    """The [4,1] code with logical X = XXII and Z = ZIZI."""
    group = StabilizerGroup.from_strings("XXXX", "ZZII", "IIZZ")
    return StabilizerCode.of("leung41", group, [parse("XXII")], [parse("ZIZI")])


def _pair_code_standard(m: int) -> StabilizerCode:
    n = 2 * m + 2
    generators = [_all_x(n)] + [_z_pair(n, a, b) for a, b in standard_pair_layout(m)]
    group = StabilizerGroup.of(n, generators)
    logical_x = [
        PauliOperator.from_sites(n, {m + 3 - i: "X", m + 2 + i: "X"}) for i in range(1, m + 1)
    ]
    logical_z = [PauliOperator.from_sites(n, {1: "Z", m + 2 + i: "Z"}) for i in range(1, m + 1)]
    return StabilizerCode.of(f"pair:{m}", group, logical_x, logical_z)


@functools.lru_cache(maxsize=None)
def pair_code(m: int, standard: bool = True) -> StabilizerCode:
    """The [2(M+1), M] code.

    Args:
        m: Number of encoded qubits, 1 to 4.
        standard: Standard layout with pairs (1,2) and (2+j, n+1-j); when
            False, the adjacent layout with pairs (2j+1, 2j+2) whose logical
            operators are carried over by the qubit swap between the two.

    Raises:
        QECUsageError: If ``m`` is out of range.
    """
    if not 1 <= m <= MAX_PAIR_M:
        raise QECUsageError(f"Pair code M must lie in 1..{MAX_PAIR_M}, got {m}")
    code = _pair_code_standard(m)
    if standard:
        return code
    n = code.n
    # Position in the standard layout -> position in the adjacent layout.
    to_adjacent = [0] * n
    for j, (a, b) in enumerate(standard_pair_layout(m)):
        to_adjacent[a - 1], to_adjacent[b - 1] = 2 * j + 1, 2 * j + 2
    generators = [_all_x(n)] + [_z_pair(n, 2 * j + 1, 2 * j + 2) for j in range(m + 1)]
    return StabilizerCode.of(
        f"pair:{m}:adjacent",
        StabilizerGroup.of(n, generators),
        [permute_qubits(op, to_adjacent) for op in code.logical_x],
        [permute_qubits(op, to_adjacent) for op in code.logical_z],
    )


@functools.lru_cache(maxsize=None)
def hamming_73(alphabet: str = "IZXY") -> StabilizerCode:
    """The [7,3] code built from the classical Hamming code."""
    group = StabilizerGroup.from_strings("IIIZZZZ", "IZZIIZZ", "ZIZIZIZ", "XXXXXXX")
    return _completed("hamming73", group, alphabet)


@functools.lru_cache(maxsize=None)
def gottesman_83(alphabet: str = "IZXY") -> StabilizerCode:
    """The Gottesman [8,3] code, which corrects any single-qubit Pauli."""
    group = StabilizerGroup.from_strings(
        "XXXXXXXX", "ZZZZZZZZ", "IXIXYZYZ", "IXZYIXZY", "IYXZXZIY"
    )
    return _completed("gottesman83", group, alphabet)


@functools.lru_cache(maxsize=None)
def shor_91(alphabet: str = "IZXY") -> StabilizerCode:
    """The Shor [9,1] code: six Z pairs inside blocks and two block-X generators."""
    n = 9
    generators = [
        _z_pair(n, a, b) for a, b in [(1, 2), (2, 3), (4, 5), (5, 6), (7, 8), (8, 9)]
    ]
    generators.append(PauliOperator.from_sites(n, {q: "X" for q in range(1, 7)}))
    generators.append(PauliOperator.from_sites(n, {q: "X" for q in range(4, 10)}))
    return _completed("shor91", StabilizerGroup.of(n, generators), alphabet)


def from_parity_check(h: ParityCheckMatrix, name: str = "") -> StabilizerCode:
    """Turn a classical parity check into an [n, k-1] amplitude damping code.

    Each row becomes a Z-type generator and the all-X generator is added.

    Raises:
        ParityCheckError: If columns repeat or vanish, if a row has odd weight
            (the all-X generator would anticommute with it), if rows are
            dependent, or if no logical qubit remains.
    """
    columns = h.columns()
    if any(not any(col) for col in columns):
        raise ParityCheckError("zero column: a single error on that bit has no syndrome")
    if len(set(columns)) != len(columns):
        raise ParityCheckError("repeated columns: the classical code does not correct one error")
    for index, row in enumerate(h.rows, start=1):
        if sum(row) % 2:
            raise ParityCheckError(
                f"row {index} has odd weight, so the code has odd parity codewords "
                "and the all-X generator would anticommute with it"
            )
    rank = gf2_rank(h.rows)
    if rank != h.r:
        raise ParityCheckError("parity check rows are linearly dependent")
    k_classical = h.n - rank
    if k_classical - 1 < 1:
        raise ParityCheckError(
            f"classical code has dimension {k_classical}, which leaves no logical qubit"
        )
    n = h.n
    generators = [
        PauliOperator.from_sites(n, {q: "Z" for q in range(1, n + 1) if row[q - 1]})
        for row in h.rows
    ]
    generators.append(_all_x(n))
    label = name or f"parity:{n},{k_classical - 1}"
    logger.debug("Parity check %dx%d converted to %s", h.r, n, label)
    return _completed(label, StabilizerGroup.of(n, generators))


CODE_REGISTRY: Dict[str, Callable[[], StabilizerCode]] = {
    "leung41": leung_41,
    "pair:1": functools.partial(pair_code, 1),
    "pair:2": functools.partial(pair_code, 2),
    "pair:3": functools.partial(pair_code, 3),
    "pair:4": functools.partial(pair_code, 4),
    "hamming73": hamming_73,
    "gottesman83": gottesman_83,
    "shor91": shor_91,
}

CODE_DESCRIPTIONS: Dict[str, str] = {
    "leung41": "[4,1] amplitude damping code",
    "pair:1": "[4,1] pair code, standard layout",
    "pair:2": "[6,2] pair code, standard layout",
    "pair:3": "[8,3] pair code, standard layout",
    "pair:4": "[10,4] pair code, standard layout",
    "hamming73": "[7,3] Hamming-derived code",
    "gottesman83": "[8,3] Gottesman code",
    "shor91": "[9,1] Shor code",
}

_SELECTOR_RE = re.compile(r"^(?P<name>[a-z0-9:]+?)(?:\^(?P<copies>\d+))?$")


def parse_selector(selector: str) -> Tuple[str, int]:
    """Split ``name^copies`` into the code name and the number of blocks."""
    match = _SELECTOR_RE.match(selector.strip().lower())
    if match is None:
        raise UnknownCodeError(selector)
    copies = int(match.group("copies") or 1)
    if copies < 1:
        raise QECUsageError(f"Block count must be positive in '{selector}'")
    return match.group("name"), copies


def get_code(name: str) -> StabilizerCode:
    """Look up a code by registry name (e.g. ``leung41``, ``pair:3``)."""
    key = name.strip().lower()
    if key not in CODE_REGISTRY:
        raise UnknownCodeError(name)
    return CODE_REGISTRY[key]()


def list_codes() -> List[Tuple[str, str]]:
    return [(name, CODE_DESCRIPTIONS[name]) for name in CODE_REGISTRY]


__all__ = [
    "ParityCheckMatrix",
    "leung_41",
    "pair_code",
    "hamming_73",
    "gottesman_83",
    "shor_91",
    "from_parity_check",
    "CODE_REGISTRY",
    "parse_selector",
    "get_code",
    "list_codes",
]
