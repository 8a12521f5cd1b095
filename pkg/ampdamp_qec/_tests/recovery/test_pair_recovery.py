import numpy as np
import pytest

from ampdamp_qec.api._enums import NoDampingMode, RecoveryMode
from ampdamp_qec.api._exceptions import MissingGammaError, QECUsageError
from ampdamp_qec.api.codes import pair_code
from ampdamp_qec.api.damping import e1_product
from ampdamp_qec.api.recovery import pair_code_recovery
from ampdamp_qec.api.recovery.pair import damped_sets, syndrome_mask
from ampdamp_qec.api.stabilizer import codewords, standard_pair_layout


@pytest.mark.parametrize("m", [1, 2, 3])
def test_element_count_and_labels(m):
    recovery = pair_code_recovery(m)
    assert len(recovery) == 2 + len(damped_sets(m))
    assert len(damped_sets(m)) == 3 ** (m + 1) - 1
    assert recovery.labels[:2] == ["no_damping:+", "no_damping:-"]
    assert recovery.mode == RecoveryMode.PROJECTION
    assert recovery.gamma is None


@pytest.mark.parametrize("m", [1, 2, 3])
def test_projection_recovery_is_complete(m):
    assert pair_code_recovery(m).completeness_deficit() < 1e-10


def test_perturbed_recovery_is_complete():
    recovery = pair_code_recovery(2, NoDampingMode.PERTURBED, 0.2)
    assert recovery.mode == RecoveryMode.PERTURBED
    assert recovery.gamma == pytest.approx(0.2)
    assert recovery.completeness_deficit() < 1e-10


def test_perturbed_needs_gamma():
    with pytest.raises(MissingGammaError):
        pair_code_recovery(2, NoDampingMode.PERTURBED)


def test_out_of_range_m():
    with pytest.raises(QECUsageError):
        pair_code_recovery(5)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_damped_branches_recover_surviving_logicals(m):
    code = pair_code(m)
    v = codewords(code)
    recovery = pair_code_recovery(m)
    for damped in damped_sets(m):
        image = np.asarray(e1_product(code.n, damped) @ v)
        alive = np.linalg.norm(image, axis=0) > 1e-12
        assert alive.sum() == 1 << (m + 1 - len(damped))
        composite = recovery.element(f"damped:{','.join(map(str, damped))}").to_dense() @ image
        assert np.allclose(composite[:, ~alive], 0.0)
        block = composite[np.ix_(alive, alive)]
        scale = block[0, 0]
        assert abs(scale) > 1e-6
        assert np.allclose(block, scale * np.eye(block.shape[0])), damped


def test_other_elements_miss_the_damped_image(pair2):
    v = codewords(pair2)
    image = np.asarray(e1_product(6, (1, 5)) @ v)
    recovery = pair_code_recovery(2)
    for element in recovery.elements:
        if element.label != "damped:1,5":
            assert np.allclose(element.to_dense() @ image, 0.0), element.label


def test_pivot_choice_gives_same_elements():
    lowest = pair_code_recovery(2, pivot="lowest")
    highest = pair_code_recovery(2, pivot="highest")
    for a, b in zip(lowest.elements, highest.elements):
        assert a.label == b.label
        assert np.allclose(a.to_dense(), b.to_dense())
    with pytest.raises(QECUsageError):
        pair_code_recovery(2, pivot="middle")


def test_syndrome_table_entries(pair2):
    outcome = pair_code_recovery(2).element("damped:1,5").syndrome
    assert outcome.damped == (1, 5)
    assert outcome.residual_dim == 2
    assert outcome.preserved_logicals == ["ZIIIZI"]
    assert ("ZZIIII", -1) in outcome.measured
    assert ("IIIZZI", -1) in outcome.measured
    assert ("IIZIIZ", 1) in outcome.measured
    assert ("ZIIIII", 1) in outcome.measured
    assert ("IIIZII", -1) in outcome.measured
    assert outcome.correction == "H(1) CX(1->all) X(1,5)"


def test_syndrome_masks_partition_the_space():
    n, pairs = 6, standard_pair_layout(2)
    total = syndrome_mask(n, pairs, ()).astype(int)
    for damped in damped_sets(2):
        total += syndrome_mask(n, pairs, damped)
    assert np.all(total == 1)
