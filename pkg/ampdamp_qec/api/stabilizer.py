"""Stabilizer Engine.

This module provides stabilizer groups and codes, their dense projectors and
codeword bases, the derivation of the stabilizer of a damped subspace, signed
membership and orthogonality queries, Knill-Laflamme checks and the reduction
of pair-family codes to standard form.
"""
from __future__ import annotations

import functools
import itertools
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field, ValidationError, model_validator
from scipy import sparse

from ..config import config
from ._base import FrozenModel
from ._exceptions import (
    AnnihilatedSubspaceError,
    DimensionMismatchError,
    InvalidCodeError,
    InvalidGroupError,
    PauliError,
    SizeGuardError,
)
from ._responses import KLReport
from .pauli import (
    PauliOperator,
    commutes,
    iter_by_weight,
    multiply,
    parse,
    product,
    symplectic_matrix,
)

logger = logging.getLogger(__name__)


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2)."""
    work = (np.array(matrix, dtype=np.uint8) & 1).copy()
    rows, cols = work.shape if work.ndim == 2 else (0, 0)
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if work[r, col]), None)
        if pivot is None:
            continue
        work[[rank, pivot]] = work[[pivot, rank]]
        for r in range(rows):
            if r != rank and work[r, col]:
                work[r] ^= work[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _key(pauli: PauliOperator) -> int:
    return (pauli.x << pauli.n) | pauli.z


def _top_bit(value: int) -> int:
    return 1 << (value.bit_length() - 1)


class StabilizerGroup(FrozenModel):
    """An abelian group of Hermitian Paulis given by independent generators."""
    n: int = Field(..., ge=1, description="Number of qubits")
    generators: Tuple[PauliOperator, ...] = Field(..., description="Ordered generators")

    @model_validator(mode="after")
    def _check_group(self) -> "StabilizerGroup":
        for g in self.generators:
            if g.n != self.n:
                raise ValueError(f"generator {g} does not act on {self.n} qubits")
            if not g.is_hermitian:
                raise ValueError(f"generator {g} must have phase +1 or -1")
        for a, b in itertools.combinations(self.generators, 2):
            if not commutes(a, b):
                raise ValueError(f"generators {a} and {b} anticommute")
        if self.generators:
            rank = gf2_rank(symplectic_matrix(self.generators, self.n))
            if rank != len(self.generators):
                raise ValueError("generators are not independent")
        return self

    @classmethod
    def of(cls, n: int, generators: Iterable[PauliOperator]) -> "StabilizerGroup":
        """Build a group, raising InvalidGroupError on invalid generators."""
        try:
            return cls(n=n, generators=tuple(generators))
        except ValidationError as e:
            raise InvalidGroupError(str(e.errors()[0]["msg"])) from e

    @classmethod
    def from_strings(cls, *texts: str) -> "StabilizerGroup":
        """Build a group from signed Pauli strings such as ``-ZZII``."""
        if not texts:
            raise InvalidGroupError("at least one generator string is needed")
        paulis = [parse(text) for text in texts]
        return cls.of(paulis[0].n, paulis)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):  # type: ignore[override]
        return iter(self.generators)

    def __getitem__(self, index: int) -> PauliOperator:
        return self.generators[index]

    def labels(self) -> List[str]:
        return [str(g) for g in self.generators]

    def extended(self, *paulis: PauliOperator) -> "StabilizerGroup":
        return StabilizerGroup.of(self.n, self.generators + tuple(paulis))


class StabilizerCode(FrozenModel):
    """An [n, k] stabilizer code with its logical operators."""
    name: str = Field(..., description="Label used in tables and CLI output")
    group: StabilizerGroup
    logical_x: Tuple[PauliOperator, ...] = Field(..., description="Logical X, one per encoded qubit")
    logical_z: Tuple[PauliOperator, ...] = Field(..., description="Logical Z, one per encoded qubit")
    permutation: Optional[Tuple[int, ...]] = Field(
        None, description="Qubit map from the source layout (entry q-1 is the new position of q)"
    )

    @model_validator(mode="after")
    def _check_logicals(self) -> "StabilizerCode":
        k = len(self.logical_x)
        if len(self.logical_z) != k:
            raise ValueError("logical_x and logical_z differ in length")
        if k != self.group.n - self.group.rank:
            raise ValueError(f"expected {self.group.n - self.group.rank} logical qubits, got {k}")
        for op in self.logical_x + self.logical_z:
            if op.n != self.group.n or not op.is_hermitian:
                raise ValueError(f"logical operator {op} is invalid")
            if not all(commutes(op, g) for g in self.group):
                raise ValueError(f"logical operator {op} anticommutes with the stabilizer")
        for i, j in itertools.product(range(k), repeat=2):
            if commutes(self.logical_x[i], self.logical_z[j]) == (i == j):
                raise ValueError(f"logical X{i + 1} and Z{j + 1} have the wrong commutation")
            if not commutes(self.logical_x[i], self.logical_x[j]):
                raise ValueError("logical X operators must commute")
            if not commutes(self.logical_z[i], self.logical_z[j]):
                raise ValueError("logical Z operators must commute")
        return self

    @classmethod
    def of(
        cls,
        name: str,
        group: StabilizerGroup,
        logical_x: Sequence[PauliOperator],
        logical_z: Sequence[PauliOperator],
        permutation: Optional[Sequence[int]] = None,
    ) -> "StabilizerCode":
        """Build a code, raising InvalidCodeError on inconsistent logicals."""
        try:
            return cls(
                name=name,
                group=group,
                logical_x=tuple(logical_x),
                logical_z=tuple(logical_z),
                permutation=tuple(permutation) if permutation is not None else None,
            )
        except ValidationError as e:
            raise InvalidCodeError(str(e.errors()[0]["msg"])) from e

    @property
    def n(self) -> int:
        return self.group.n

    @property
    def k(self) -> int:
        return len(self.logical_x)

    def renamed(self, name: str) -> "StabilizerCode":
        return self.model_copy(update={"name": name})

    def table(self) -> List[str]:
        """Stabilizer table rows followed by the logical operators."""
        rows = [str(g) for g in self.group]
        rows += [f"X{i + 1}: {op}" for i, op in enumerate(self.logical_x)]
        rows += [f"Z{i + 1}: {op}" for i, op in enumerate(self.logical_z)]
        return rows


# Membership


def _reduce(paulis: Sequence[PauliOperator], target: PauliOperator) -> Optional[int]:
    """Subset mask of ``paulis`` whose product has the letters of ``target``."""
    basis: Dict[int, Tuple[int, int]] = {}
    for index, pauli in enumerate(paulis):
        vec, comb = _key(pauli), 1 << index
        for top in sorted(basis, reverse=True):
            if vec & top:
                vec ^= basis[top][0]
                comb ^= basis[top][1]
        if vec:
            basis[_top_bit(vec)] = (vec, comb)
    vec, comb = _key(target), 0
    for top in sorted(basis, reverse=True):
        if vec & top:
            vec ^= basis[top][0]
            comb ^= basis[top][1]
    return comb if vec == 0 else None


def find_element(group: StabilizerGroup, pauli: PauliOperator) -> Optional[PauliOperator]:
    """The group element with the same letters as ``pauli``, if one exists."""
    if pauli.n != group.n:
        raise PauliError(f"Qubit count mismatch: {pauli.n} vs {group.n}")
    comb = _reduce(group.generators, pauli)
    if comb is None:
        return None
    chosen = [g for i, g in enumerate(group.generators) if comb >> i & 1]
    return product(chosen, group.n)


def contains(group: StabilizerGroup, pauli: PauliOperator) -> bool:
    """Signed membership: True iff ``pauli`` itself, sign included, is in the group."""
    element = find_element(group, pauli)
    return element is not None and element.phase_exp == pauli.phase_exp


def elements(group: StabilizerGroup) -> Iterable[PauliOperator]:
    """All 2^r group elements."""
    for mask in range(1 << group.rank):
        yield product(
            (g for i, g in enumerate(group.generators) if mask >> i & 1), group.n
        )


def dimension(group: StabilizerGroup) -> int:
    return 1 << (group.n - group.rank)


def orthogonal(a: StabilizerGroup, b: StabilizerGroup) -> bool:
    """True iff some g stabilizes ``a`` while -g stabilizes ``b``."""
    if a.n != b.n:
        raise DimensionMismatchError(f"Groups act on {a.n} and {b.n} qubits")
    small, large = (a, b) if a.rank <= b.rank else (b, a)
    for g in elements(small):
        other = find_element(large, g)
        if other is not None and other.phase_exp != g.phase_exp:
            return True
    return False


# Dense realizations


def _guard(n: int) -> None:
    if n > config.dense_qubit_limit:
        raise SizeGuardError(n, config.dense_qubit_limit)


def projector(group: StabilizerGroup) -> np.ndarray:
    """Dense projector onto the stabilized subspace, the product of (I + g)/2."""
    _guard(group.n)
    result = np.eye(1 << group.n, dtype=complex)
    for g in group:
        result = (result + g.apply(result)) / 2
    return result


def range_projector(matrix: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Projector onto the column space of ``matrix`` by a rank-revealing SVD."""
    tol = config.rank_tolerance if tol is None else tol
    dense = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix)
    u, s, _ = np.linalg.svd(dense, full_matrices=False)
    basis = u[:, s > tol * max(1.0, s[0] if s.size else 1.0)]
    return basis @ basis.conj().T


def _z_type_elements(group: StabilizerGroup) -> List[PauliOperator]:
    """Generators of the subgroup of elements without X components."""
    basis: Dict[int, PauliOperator] = {}
    z_only = []
    for g in group:
        current = g
        for top in sorted(basis, reverse=True):
            if current.x & top:
                current = multiply(current, basis[top])
        if current.x:
            basis[_top_bit(current.x)] = current
        else:
            z_only.append(current)
    return z_only


def _support_state(group: StabilizerGroup) -> int:
    """A computational basis index with nonzero overlap with the stabilized subspace."""
    pivots: Dict[int, Tuple[int, int]] = {}
    for z_op in _z_type_elements(group):
        mask, rhs = z_op.z, 1 if z_op.phase_exp == 2 else 0
        for top in sorted(pivots, reverse=True):
            if mask & top:
                mask ^= pivots[top][0]
                rhs ^= pivots[top][1]
        if mask == 0:
            if rhs:
                raise InvalidGroupError("group contains -I")
            continue
        pivots[_top_bit(mask)] = (mask, rhs)
    index = 0
    for top in sorted(pivots):
        mask, rhs = pivots[top]
        rest = bin(mask & ~top & index).count("1") & 1
        if rhs ^ rest:
            index |= top
    return index


def stabilizer_state(group: StabilizerGroup) -> np.ndarray:
    """Normalized state of a group with n independent generators.

    The global phase makes the first nonzero amplitude real and positive.
    """
    if group.rank != group.n:
        raise InvalidGroupError(f"a stabilizer state needs {group.n} generators, got {group.rank}")
    _guard(group.n)
    state = np.zeros(1 << group.n, dtype=complex)
    state[_support_state(group)] = 1.0
    for g in group:
        state = (state + g.apply(state)) / 2
    state /= np.linalg.norm(state)
    first = np.flatnonzero(np.abs(state) > config.oracle_tolerance)[0]
    return state * (abs(state[first]) / state[first])


@functools.lru_cache(maxsize=64)
def _codeword_matrix(code: StabilizerCode) -> np.ndarray:
    columns = []
    for b in range(1 << code.k):
        constraints = []
        for i, z_op in enumerate(code.logical_z):
            bit = (b >> (code.k - 1 - i)) & 1
            constraints.append(-z_op if bit else z_op)
        columns.append(stabilizer_state(code.group.extended(*constraints)))
    matrix = np.stack(columns, axis=1)
    matrix.setflags(write=False)
    return matrix


def codewords(code: StabilizerCode) -> np.ndarray:
    """Encoding isometry: column ``b`` is the codeword for logical bit string ``b``.

    Bit ``b_1`` (logical qubit 1) is the most significant bit of the column
    index. Column ``b`` is the +1 eigenvector of every generator with
    eigenvalue ``(-1)^{b_i}`` under ``logical_z[i]``.
    """
    _guard(code.n)
    return _codeword_matrix(code)


# Damped subspaces


def damped_subspace(group: StabilizerGroup, qubit: int) -> StabilizerGroup:
    """Stabilizer of the image of the subspace under a damping of ``qubit``.

    The generators are first reduced at the target column so that at most one
    carries an X component and at most one other a Z component there. The
    X-carrying generator is dropped, the Z-carrying one flips sign, the rest
    are kept and Z on the damped qubit is appended.

    Raises:
        PauliError: If ``qubit`` is out of range.
        AnnihilatedSubspaceError: If every state in the subspace has the
            qubit in |0>.
    """
    n = group.n
    if not 1 <= qubit <= n:
        raise PauliError(f"Qubit {qubit} out of range 1..{n}")
    z_target = PauliOperator.single(n, qubit, "Z")
    if contains(group, z_target):
        raise AnnihilatedSubspaceError(qubit)

    bit = 1 << (n - qubit)
    gens = list(group.generators)
    x_pivot = next((i for i, g in enumerate(gens) if g.x & bit), None)
    if x_pivot is not None:
        for i, g in enumerate(gens):
            if i != x_pivot and g.x & bit:
                gens[i] = multiply(g, gens[x_pivot])
    z_pivot = next(
        (i for i, g in enumerate(gens) if i != x_pivot and g.z & bit), None
    )
    if z_pivot is not None:
        for i, g in enumerate(gens):
            if i not in (x_pivot, z_pivot) and g.z & bit:
                gens[i] = multiply(g, gens[z_pivot])

    kept = []
    for i, g in enumerate(gens):
        if i == x_pivot:
            continue
        kept.append(-g if i == z_pivot else g)
    derived = StabilizerGroup.of(n, kept)
    if find_element(derived, z_target) is None:
        derived = derived.extended(z_target)
    logger.debug("Damped qubit %d: %s", qubit, " / ".join(derived.labels()))
    return derived


def damped_subspace_set(group: StabilizerGroup, qubits: Iterable[int]) -> StabilizerGroup:
    """Iterated derivation over ``qubits`` in ascending order."""
    result = group
    for qubit in sorted(set(qubits)):
        result = damped_subspace(result, qubit)
    return result


def preserved_logicals(code: StabilizerCode, damped: Iterable[int]) -> List[PauliOperator]:
    """Signed products of logical Z operators that stabilize the damped subspace."""
    surviving = damped_subspace_set(code.group, damped)
    found = []
    for mask in range(1, 1 << code.k):
        op = product(
            (z for i, z in enumerate(code.logical_z) if mask >> i & 1), code.n
        )
        element = find_element(surviving, op)
        if element is not None:
            found.append(element)
    return found


# Knill-Laflamme


def check_knill_laflamme(
    code: StabilizerCode,
    errors: Sequence,
    tol: Optional[float] = None,
) -> KLReport:
    """Check the Knill-Laflamme conditions for a set of error matrices.

    Args:
        code: Code whose codeword basis is used.
        errors: Dense or scipy.sparse ``2^n x 2^n`` matrices.
        tol: Allowed deviation, ``config.kl_tolerance`` when omitted.

    Returns:
        KLReport: Scalar matrix C_ab, the verdict and the largest violation.

    Raises:
        DimensionMismatchError: If an error matrix has the wrong shape.
    """
    tol = config.kl_tolerance if tol is None else tol
    v = codewords(code)
    dim = v.shape[0]
    images = []
    for error in errors:
        if error.shape != (dim, dim):
            raise DimensionMismatchError(f"Error matrix shape {error.shape}, expected {(dim, dim)}")
        images.append(np.asarray(error @ v))
    count = len(images)
    gram = np.zeros((count, count), dtype=complex)
    violation = 0.0
    eye = np.eye(v.shape[1])
    for a, b in itertools.product(range(count), repeat=2):
        block = images[a].conj().T @ images[b]
        scalar = np.trace(block) / block.shape[0]
        gram[a, b] = scalar
        violation = max(violation, float(np.max(np.abs(block - scalar * eye))))
    logger.debug("KL check on %s with %d errors: max violation %.3e", code.name, count, violation)
    return KLReport(
        correctable=violation < tol, gram=gram, max_violation=violation, tolerance=tol
    )


# Logical operators and standard form


def logical_completion(
    group: StabilizerGroup, alphabet: str = "IZXY"
) -> Tuple[List[PauliOperator], List[PauliOperator]]:
    """Deterministic logical operators for a stabilizer group.

    Candidates are scanned by weight and then lexicographically under
    ``alphabet``. For each encoded qubit, Z is the first normalizer element
    independent of everything chosen so far that commutes with it, and X is
    the first normalizer element that anticommutes with that Z only.
    """
    n, k = group.n, group.n - group.rank
    logical_x: List[PauliOperator] = []
    logical_z: List[PauliOperator] = []

    def in_normalizer(op: PauliOperator) -> bool:
        return all(commutes(op, g) for g in group)

    for _ in range(k):
        chosen = list(group.generators) + logical_x + logical_z
        z_op = next(
            op
            for op in iter_by_weight(n, alphabet)
            if in_normalizer(op)
            and all(commutes(op, c) for c in logical_x + logical_z)
            and _reduce(chosen, op) is None
        )
        x_op = next(
            op
            for op in iter_by_weight(n, alphabet)
            if in_normalizer(op)
            and not commutes(op, z_op)
            and all(commutes(op, c) for c in logical_x + logical_z)
        )
        logical_z.append(z_op)
        logical_x.append(x_op)
    return logical_x, logical_z


def permute_qubits(pauli: PauliOperator, mapping: Sequence[int]) -> PauliOperator:
    """Move the factor on qubit q to qubit ``mapping[q - 1]``."""
    sites = {mapping[q - 1]: pauli.letter(q) for q in range(1, pauli.n + 1)}
    moved = PauliOperator.from_sites(pauli.n, {q: s for q, s in sites.items() if s != "I"})
    return PauliOperator._make(moved.n, moved.x, moved.z, pauli.phase_exp)


def standard_pair_layout(m: int) -> List[Tuple[int, int]]:
    """Qubit pairs of the standard-form [2(M+1), M] code."""
    n = 2 * m + 2
    return [(1, 2)] + [(2 + j, n + 1 - j) for j in range(1, m + 1)]


def pair_family_pairs(code: StabilizerCode) -> Optional[List[Tuple[int, int]]]:
    """The Z-pair matching when ``code`` is in the pair family, else None."""
    n = code.n
    if n % 2 or n < 4 or code.k != n // 2 - 1:
        return None
    if not contains(code.group, PauliOperator.from_sites(n, {q: "X" for q in range(1, n + 1)})):
        return None
    pairs = []
    for element in elements(code.group):
        if element.x == 0 and element.weight == 2 and element.phase_exp == 0:
            pairs.append(element.support)
    covered = sorted(q for pair in pairs for q in pair)
    if covered != list(range(1, n + 1)):
        return None
    return sorted(pairs)


def standard_form(code: StabilizerCode) -> Tuple[StabilizerCode, bool]:
    """Reduce a pair-family code to the standard layout by swapping qubits.

    Returns:
        The equivalent standard-form code with the qubit permutation recorded,
        and True; or the input unchanged and False when the code is not in
        the pair family. A code already in standard layout is returned as is.
    """
    from .codes import pair_code

    pairs = pair_family_pairs(code)
    if pairs is None:
        logger.debug("Code %s is not in the pair family", code.name)
        return code, False
    m = code.n // 2 - 1
    mapping = [0] * code.n
    for (a, b), (ta, tb) in zip(pairs, standard_pair_layout(m)):
        mapping[a - 1], mapping[b - 1] = ta, tb
    if mapping == list(range(1, code.n + 1)):
        return code, True
    target = pair_code(m)
    logger.debug("Standard form of %s uses permutation %s", code.name, mapping)
    return (
        StabilizerCode.of(
            f"{code.name}:standard",
            target.group,
            target.logical_x,
            target.logical_z,
            permutation=mapping,
        ),
        True,
    )


__all__ = [
    "StabilizerGroup",
    "StabilizerCode",
    "gf2_rank",
    "find_element",
    "contains",
    "elements",
    "dimension",
    "orthogonal",
    "projector",
    "range_projector",
    "stabilizer_state",
    "codewords",
    "damped_subspace",
    "damped_subspace_set",
    "preserved_logicals",
    "check_knill_laflamme",
    "logical_completion",
    "permute_qubits",
    "standard_pair_layout",
    "pair_family_pairs",
    "standard_form",
]
