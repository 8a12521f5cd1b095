"""Circuit Kit.

This module provides a small gate-level circuit model, builders for the
encoding, syndrome and recovery circuits of the amplitude damping codes, a
dense statevector simulator with measurement branching, Clifford propagation
of Pauli operators and a line-per-gate text format.

Qubits are 1-based in the model; data qubits come first and ancillas follow.
The text format uses 0-based ``q[i]`` and ``c[j]`` indices.
"""
from __future__ import annotations

import logging
import re
from collections import Counter
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import Field, ValidationError, model_validator

from ..config import config
from ._base import FrozenModel, ResultModel, TableResult
from ._enums import SyndromeStage
from ._exceptions import CircuitError, DimensionMismatchError, SizeGuardError, UnsupportedStageError
from .codes import MAX_PAIR_M, get_code, parse_selector
from .pauli import PauliOperator
from .stabilizer import standard_pair_layout

logger = logging.getLogger(__name__)

GateName = Literal["h", "x", "z", "cx", "measure"]

_ARITY = {"h": 1, "x": 1, "z": 1, "cx": 2, "measure": 1}
_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


class Gate(FrozenModel):
    """One gate: ``cx`` takes (control, target); ``measure`` writes ``cbit``."""
    name: GateName
    qubits: Tuple[int, ...]
    cbit: Optional[int] = Field(None, ge=0)

    @model_validator(mode="after")
    def _check_arity(self) -> "Gate":
        if len(self.qubits) != _ARITY[self.name]:
            raise ValueError(f"{self.name} acts on {_ARITY[self.name]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("cx control and target must differ")
        if (self.name == "measure") != (self.cbit is not None):
            raise ValueError("exactly the measure gate carries a classical bit")
        return self


class Circuit(FrozenModel):
    """An ordered gate list on data qubits followed by ancillas."""
    num_data_qubits: int = Field(..., ge=1)
    num_ancilla: int = Field(0, ge=0)
    classical_bits: int = Field(0, ge=0)
    gates: Tuple[Gate, ...] = ()
    name: str = ""

    @model_validator(mode="after")
    def _check_indices(self) -> "Circuit":
        for gate in self.gates:
            if any(not 1 <= q <= self.num_qubits for q in gate.qubits):
                raise ValueError(f"{gate.name} on {gate.qubits} outside 1..{self.num_qubits}")
            if gate.cbit is not None and gate.cbit >= self.classical_bits:
                raise ValueError(f"classical bit {gate.cbit} outside 0..{self.classical_bits - 1}")
        return self

    @classmethod
    def of(cls, **fields) -> "Circuit":
        try:
            return cls(**fields)
        except ValidationError as e:
            raise CircuitError(f"Invalid circuit: {e.errors()[0]['msg']}") from e

    @property
    def num_qubits(self) -> int:
        return self.num_data_qubits + self.num_ancilla

    def gate_counts(self) -> Dict[str, int]:
        return dict(Counter(gate.name for gate in self.gates))

    def count(self, name: str) -> int:
        return sum(1 for gate in self.gates if gate.name == name)

    def __len__(self) -> int:
        return len(self.gates)


def _h(q: int) -> Gate:
    return Gate(name="h", qubits=(q,))


def _x(q: int) -> Gate:
    return Gate(name="x", qubits=(q,))


def _cx(control: int, target: int) -> Gate:
    return Gate(name="cx", qubits=(control, target))


def _measure(q: int, cbit: int) -> Gate:
    return Gate(name="measure", qubits=(q,), cbit=cbit)


# Builders


def _check_m(m: int) -> None:
    if not 1 <= m <= MAX_PAIR_M:
        raise CircuitError(f"Pair code M must lie in 1..{MAX_PAIR_M}, got {m}")


def encoding_input_qubits(m: int) -> List[int]:
    """Wires holding the M input qubits of the encoder, logical qubit 1 first."""
    _check_m(m)
    return [m + 2 + i for i in range(1, m + 1)]


def build_encoding_circuit(m: int) -> Circuit:
    """Encoder of the standard-form [2(M+1), M] code.

    Input qubit i sits on wire M+2+i and is copied onto its pair partner
    M+3-i; a Hadamard on qubit 1 followed by a CNOT from it onto every other
    qubit then creates the all-X superposition. That makes 3M+1 CNOTs and
    one Hadamard.
    """
    _check_m(m)
    n = 2 * m + 2
    gates = [_cx(m + 2 + i, m + 3 - i) for i in range(1, m + 1)]
    gates.append(_h(1))
    gates += [_cx(1, q) for q in range(2, n + 1)]
    return Circuit.of(num_data_qubits=n, gates=tuple(gates), name=f"encode:pair:{m}")


def measurement_circuit(n: int, generators: Sequence[PauliOperator], name: str = "") -> Circuit:
    """Measure each Z-type or X-type generator on its own ancilla.

    Outcome bit 0 means eigenvalue +1. Z-type generators are read by CNOTs
    from the data onto the ancilla; X-type generators by a Hadamard-sandwiched
    ancilla controlling X on the data.

    Raises:
        CircuitError: For generators that mix X and Z.
    """
    gates: List[Gate] = []
    for index, g in enumerate(generators):
        ancilla = n + 1 + index
        if g.x and g.z:
            raise CircuitError(f"{g} is neither Z-type nor X-type")
        if g.x:
            gates.append(_h(ancilla))
            gates += [_cx(ancilla, q) for q in g.support]
            gates.append(_h(ancilla))
        else:
            gates += [_cx(q, ancilla) for q in g.support]
        gates.append(_measure(ancilla, index))
    count = len(generators)
    return Circuit.of(
        num_data_qubits=n, num_ancilla=count, classical_bits=count, gates=tuple(gates), name=name
    )


def _pair_count(name: str) -> Optional[int]:
    if name == "leung41":
        return 1
    if name.startswith("pair:"):
        return int(name.split(":")[1])
    return None


def stage_generators(code_name: str, stage: Union[str, SyndromeStage]) -> List[PauliOperator]:
    """Operators measured by one syndrome stage of a code.

    Raises:
        UnknownCodeError: If the code is unknown.
        UnsupportedStageError: If the code has no circuit for ``stage``.
    """
    name, _ = parse_selector(code_name)
    try:
        stage = SyndromeStage(stage)
    except ValueError:
        raise UnsupportedStageError(code_name, str(stage))
    code = get_code(name)
    n = code.n
    all_x = PauliOperator.from_sites(n, {q: "X" for q in range(1, n + 1)})
    m = _pair_count(name)
    if m is not None:
        pairs = standard_pair_layout(m)
        if stage == SyndromeStage.Z_PAIRS:
            return [PauliOperator.from_sites(n, {a: "Z", b: "Z"}) for a, b in pairs]
        if stage == SyndromeStage.NO_DAMPING_X:
            return [all_x]
        if stage == SyndromeStage.PER_PAIR_Z:
            return [PauliOperator.single(n, a, "Z") for a, _ in pairs]
    elif name == "hamming73":
        if stage == SyndromeStage.HAMMING_BITS:
            return list(code.group.generators)
        if stage == SyndromeStage.NO_DAMPING_X:
            return [all_x]
    elif name == "shor91":
        generators = code.group.generators
        if stage == SyndromeStage.Z_PAIRS:
            return list(generators[:6])
        if stage == SyndromeStage.NO_DAMPING_X:
            return list(generators[6:])
        if stage == SyndromeStage.PER_PAIR_Z:
            return [PauliOperator.single(n, q, "Z") for q in (1, 4, 7)]
    raise UnsupportedStageError(code_name, stage.value)


def build_syndrome_circuit(code_name: str, stage: Union[str, SyndromeStage]) -> Circuit:
    """Ancilla circuit for one syndrome stage, e.g. the Z pairs of ``pair:2``."""
    generators = stage_generators(code_name, stage)
    stage = SyndromeStage(stage)
    circuit = measurement_circuit(
        generators[0].n, generators, name=f"syndrome:{code_name}:{stage.value}"
    )
    logger.debug("Built %s with %d ancillas", circuit.name, circuit.num_ancilla)
    return circuit


def build_recovery_circuit(m: int, damped: Sequence[int]) -> Circuit:
    """H on the lowest damped qubit, a CNOT from it onto every other qubit, X on each damped qubit.

    Raises:
        CircuitError: If ``damped`` is empty, out of range or hits a pair twice.
    """
    _check_m(m)
    n = 2 * m + 2
    damped = tuple(sorted(set(damped)))
    if not damped:
        raise CircuitError("A recovery circuit needs at least one damped qubit")
    if any(not 1 <= q <= n for q in damped):
        raise CircuitError(f"Damped qubits must lie in 1..{n}")
    for a, b in standard_pair_layout(m):
        if a in damped and b in damped:
            raise CircuitError(f"Qubits {a} and {b} share a pair and cannot both be damped")
    pivot = damped[0]
    gates = [_h(pivot)] + [_cx(pivot, q) for q in range(1, n + 1) if q != pivot]
    gates += [_x(q) for q in damped]
    label = ",".join(str(q) for q in damped)
    return Circuit.of(num_data_qubits=n, gates=tuple(gates), name=f"recovery:pair:{m}:{label}")


# Simulation


def _apply_gate(tensor: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply a unitary gate to a tensor whose leading axes are qubits 1..N."""
    if gate.name == "h":
        axis = gate.qubits[0] - 1
        return np.moveaxis(np.tensordot(_HADAMARD, tensor, axes=([1], [axis])), 0, axis)
    if gate.name == "x":
        return np.flip(tensor, axis=gate.qubits[0] - 1)
    if gate.name == "z":
        out = tensor.copy()
        index = [slice(None)] * tensor.ndim
        index[gate.qubits[0] - 1] = 1
        out[tuple(index)] *= -1
        return out
    if gate.name == "cx":
        control, target = (q - 1 for q in gate.qubits)
        out = tensor.copy()
        index = [slice(None)] * tensor.ndim
        index[control] = 1
        axis = target - 1 if target > control else target
        out[tuple(index)] = np.flip(tensor[tuple(index)], axis=axis)
        return out
    raise CircuitError(f"{gate.name} is not unitary")


class SimulationBranch(ResultModel):
    """One measurement record with its normalized post-measurement state."""
    bits: Tuple[int, ...] = Field(..., description="Classical register, 0 for +1 and 1 for -1")
    state: np.ndarray
    probability: float = Field(..., ge=0)


class SimulationResult(TableResult[SimulationBranch]):
    """Measurement branches in order of their bit strings."""
    num_qubits: int

    def probabilities(self) -> Dict[Tuple[int, ...], float]:
        return {branch.bits: branch.probability for branch in self.rows}

    def total_probability(self) -> float:
        return float(sum(branch.probability for branch in self.rows))


def _guard(circuit: Circuit) -> None:
    if circuit.num_qubits > config.dense_qubit_limit:
        raise SizeGuardError(circuit.num_qubits, config.dense_qubit_limit)


def _full_input(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex).reshape(-1)
    if state.size == 1 << circuit.num_qubits:
        return state
    if state.size == 1 << circuit.num_data_qubits:
        ancilla = np.zeros(1 << circuit.num_ancilla, dtype=complex)
        ancilla[0] = 1.0
        return np.kron(state, ancilla)
    raise DimensionMismatchError(
        f"State of size {state.size} fits neither the data qubits nor the full circuit"
    )


def simulate(circuit: Circuit, state: np.ndarray, cutoff: float = 1e-20) -> SimulationResult:
    """Dense statevector evolution, branching at every measurement.

    ``state`` covers either every qubit or only the data qubits, in which case
    the ancillas start in |0>. Branches whose probability does not exceed
    ``cutoff`` are dropped.

    Raises:
        SizeGuardError: If the circuit has more qubits than ``config.dense_qubit_limit``.
    """
    _guard(circuit)
    shape = (2,) * circuit.num_qubits
    initial = _full_input(circuit, state)
    norm = np.linalg.norm(initial)
    if norm == 0:
        raise DimensionMismatchError("Input state is zero")
    # Each branch holds an unnormalized tensor whose squared norm is its probability.
    branches: List[Tuple[Tuple[int, ...], np.ndarray]] = [
        ((0,) * circuit.classical_bits, (initial / norm).reshape(shape))
    ]
    for gate in circuit.gates:
        if gate.name != "measure":
            branches = [(bits, _apply_gate(tensor, gate)) for bits, tensor in branches]
            continue
        axis = gate.qubits[0] - 1
        split = []
        for bits, tensor in branches:
            for outcome in (0, 1):
                projected = np.zeros_like(tensor)
                index = [slice(None)] * tensor.ndim
                index[axis] = outcome
                projected[tuple(index)] = tensor[tuple(index)]
                if np.vdot(projected, projected).real > cutoff:
                    record = list(bits)
                    record[gate.cbit] = outcome
                    split.append((tuple(record), projected))
        branches = split
    rows = []
    for bits, tensor in sorted(branches, key=lambda item: item[0]):
        vector = tensor.reshape(-1)
        probability = float(np.vdot(vector, vector).real)
        rows.append(
            SimulationBranch(bits=bits, state=vector / np.sqrt(probability), probability=probability)
        )
    return SimulationResult(rows=rows, num_qubits=circuit.num_qubits)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a circuit without measurements.

    Raises:
        CircuitError: If the circuit measures.
    """
    _guard(circuit)
    if any(gate.name == "measure" for gate in circuit.gates):
        raise CircuitError("Circuits with measurements have no unitary")
    dim = 1 << circuit.num_qubits
    tensor = np.eye(dim, dtype=complex).reshape((2,) * circuit.num_qubits + (dim,))
    for gate in circuit.gates:
        tensor = _apply_gate(tensor, gate)
    return tensor.reshape(dim, dim)


def encoding_isometry(m: int) -> np.ndarray:
    """Columns are the encoder outputs for each logical basis input, bit 1 most significant."""
    circuit = build_encoding_circuit(m)
    unitary = circuit_unitary(circuit)
    n = circuit.num_qubits
    wires = encoding_input_qubits(m)
    columns = []
    for b in range(1 << m):
        index = 0
        for i, wire in enumerate(wires):
            if (b >> (m - 1 - i)) & 1:
                index |= 1 << (n - wire)
        columns.append(unitary[:, index])
    return np.stack(columns, axis=1)


# Clifford propagation


def propagate(circuit: Circuit, pauli: PauliOperator) -> PauliOperator:
    """U P U^dag for the unitary U of ``circuit``.

    Raises:
        CircuitError: If the circuit measures.
        DimensionMismatchError: If ``pauli`` does not act on the circuit's qubits.
    """
    if pauli.n != circuit.num_qubits:
        raise DimensionMismatchError(
            f"Pauli on {pauli.n} qubits, circuit on {circuit.num_qubits}"
        )
    n = pauli.n
    x, z, phase = pauli.x, pauli.z, pauli.phase_exp
    for gate in circuit.gates:
        if gate.name == "measure":
            raise CircuitError("Cannot propagate through a measurement")
        bits = [1 << (n - q) for q in gate.qubits]
        if gate.name == "h":
            (b,) = bits
            if x & b and z & b:
                phase += 2
            xb, zb = x & b, z & b
            x, z = (x & ~b) | zb, (z & ~b) | xb
        elif gate.name == "x":
            if z & bits[0]:
                phase += 2
        elif gate.name == "z":
            if x & bits[0]:
                phase += 2
        else:
            c, t = bits
            xc, zc, xt, zt = bool(x & c), bool(z & c), bool(x & t), bool(z & t)
            if xc and zt and (xt == zc):
                phase += 2
            if xc:
                x ^= t
            if zt:
                z ^= c
    return PauliOperator(n=n, x=x, z=z, phase_exp=phase % 4)


# Text format

_HEADER_RE = re.compile(r"^qubits (\d+) / cbits (\d+)$")
_ONE_RE = re.compile(r"^(h|x|z) q\[(\d+)\]$")
_CX_RE = re.compile(r"^cx q\[(\d+)\],q\[(\d+)\]$")
_MEASURE_RE = re.compile(r"^measure q\[(\d+)\] -> c\[(\d+)\]$")


def emit_text(circuit: Circuit) -> str:
    """One line per gate under a ``qubits N / cbits M`` header, 0-based indices."""
    lines = [f"qubits {circuit.num_qubits} / cbits {circuit.classical_bits}"]
    for gate in circuit.gates:
        q = [i - 1 for i in gate.qubits]
        if gate.name == "cx":
            lines.append(f"cx q[{q[0]}],q[{q[1]}]")
        elif gate.name == "measure":
            lines.append(f"measure q[{q[0]}] -> c[{gate.cbit}]")
        else:
            lines.append(f"{gate.name} q[{q[0]}]")
    return "\n".join(lines) + "\n"


def parse_text(text: str, name: str = "") -> Circuit:
    """Inverse of :func:`emit_text`.

    Measured qubits are taken to be the trailing ancillas: the ancilla block
    starts at the lowest measured qubit.

    Raises:
        CircuitError: For a missing header or an unrecognized line.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise CircuitError("Empty circuit text")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise CircuitError(f"Bad header: {lines[0]!r}")
    num_qubits, cbits = int(header.group(1)), int(header.group(2))
    gates: List[Gate] = []
    for number, line in enumerate(lines[1:], start=2):
        try:
            if match := _ONE_RE.match(line):
                gates.append(Gate(name=match.group(1), qubits=(int(match.group(2)) + 1,)))
            elif match := _CX_RE.match(line):
                gates.append(_cx(int(match.group(1)) + 1, int(match.group(2)) + 1))
            elif match := _MEASURE_RE.match(line):
                gates.append(_measure(int(match.group(1)) + 1, int(match.group(2))))
            else:
                raise CircuitError(f"Line {number} not understood: {line!r}")
        except ValidationError as e:
            raise CircuitError(f"Line {number}: {e.errors()[0]['msg']}") from e
    measured = [gate.qubits[0] for gate in gates if gate.name == "measure"]
    ancilla = num_qubits - min(measured) + 1 if measured else 0
    return Circuit.of(
        num_data_qubits=num_qubits - ancilla,
        num_ancilla=ancilla,
        classical_bits=cbits,
        gates=tuple(gates),
        name=name,
    )


__all__ = [
    "Gate",
    "Circuit",
    "SimulationBranch",
    "SimulationResult",
    "encoding_input_qubits",
    "build_encoding_circuit",
    "measurement_circuit",
    "stage_generators",
    "build_syndrome_circuit",
    "build_recovery_circuit",
    "simulate",
    "circuit_unitary",
    "encoding_isometry",
    "propagate",
    "emit_text",
    "parse_text",
]
