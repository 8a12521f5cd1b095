import numpy as np
import pytest

from ampdamp_qec.api._enums import NoDampingMode, RecoveryMode
from ampdamp_qec.api._exceptions import SyndromeCollisionError
from ampdamp_qec.api.codes import gottesman_83, pair_code, shor_91
from ampdamp_qec.api.fidelity import gamma_grid, pipeline_fidelity
from ampdamp_qec.api.pauli import PauliOperator, parse
from ampdamp_qec.api.recovery import (
    generic_stabilizer_recovery,
    pair_code_recovery,
    single_qubit_table,
    syndrome_of,
)
from ampdamp_qec.api.stabilizer import codewords


@pytest.fixture(scope="module")
def gottesman():
    return gottesman_83()


def test_syndrome_bits(hamming):
    assert syndrome_of(hamming, PauliOperator.single(7, 5, "X")) == 0b1010
    assert syndrome_of(hamming, parse("IIIIIII")) == 0


def test_gottesman_single_qubit_table(gottesman):
    assert len(single_qubit_table(gottesman)) == 25


def test_shor_has_colliding_syndromes():
    with pytest.raises(SyndromeCollisionError):
        single_qubit_table(shor_91())


def test_generic_recovery_leaves_zero_elements(gottesman):
    recovery = generic_stabilizer_recovery(gottesman)
    assert recovery.mode == RecoveryMode.GENERIC_STABILIZER
    assert len(recovery) == 32
    assert recovery.metadata == {"single_qubit_syndromes": 25, "assigned_syndromes": 25}
    empty = [e for e in recovery.elements if e.matrix.nnz == 0]
    assert len(empty) == 7
    assert all(e.syndrome.residual_dim == 0 for e in empty)
    assert recovery.completeness_excess() < 1e-10


def test_generic_recovery_corrects_single_paulis(gottesman):
    v = codewords(gottesman)
    recovery = generic_stabilizer_recovery(gottesman)
    for qubit in (1, 3, 8):
        for letter in "XYZ":
            error = PauliOperator.single(8, qubit, letter)
            label = f"syndrome:{syndrome_of(gottesman, error):05b}"
            composite = recovery.element(label).to_dense() @ error.apply(v)
            assert np.allclose(composite, np.eye(8))


def test_adapted_recovery_fills_every_syndrome(gottesman):
    recovery = generic_stabilizer_recovery(gottesman, adapted=True)
    assert recovery.mode == RecoveryMode.ADAPTED_STABILIZER
    assert recovery.metadata["assigned_syndromes"] == 32
    assert recovery.completeness_deficit() < 1e-10
    for element in recovery.elements:
        correction = parse(element.syndrome.correction)
        if correction.weight == 2:
            assert all(correction.letter(q) in "XY" for q in correction.support)


@pytest.mark.slow
def test_adapted_recovery_is_not_worse(gottesman):
    generic_recovery = generic_stabilizer_recovery(gottesman)
    adapted_recovery = generic_stabilizer_recovery(gottesman, adapted=True)
    for gamma in gamma_grid(0.01, 0.3, 30):
        generic, _ = pipeline_fidelity(gottesman, generic_recovery, gamma)
        adapted, _ = pipeline_fidelity(gottesman, adapted_recovery, gamma)
        assert adapted >= generic - 1e-12, gamma


@pytest.mark.parametrize("gamma", [0.01, 0.05, 0.1])
def test_channel_adapted_pair_code_beats_gottesman(gottesman, gamma):
    generic, _ = pipeline_fidelity(gottesman, generic_stabilizer_recovery(gottesman), gamma)
    adapted, _ = pipeline_fidelity(
        gottesman, generic_stabilizer_recovery(gottesman, adapted=True), gamma
    )
    pair, _ = pipeline_fidelity(
        pair_code(3), pair_code_recovery(3, NoDampingMode.PERTURBED, gamma), gamma
    )
    assert generic <= adapted + 1e-12
    assert adapted < pair


@pytest.mark.parametrize("adapted", [False, True])
def test_logical_basis_does_not_change_fidelity(gottesman, adapted):
    other = gottesman_83("IXZY")
    f_default, _ = pipeline_fidelity(
        gottesman, generic_stabilizer_recovery(gottesman, adapted=adapted), 0.1
    )
    f_other, _ = pipeline_fidelity(other, generic_stabilizer_recovery(other, adapted=adapted), 0.1)
    assert f_default == pytest.approx(f_other, abs=1e-10)
