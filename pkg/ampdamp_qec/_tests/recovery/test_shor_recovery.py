import numpy as np
import pytest

from ampdamp_qec.api._enums import RecoveryMode
from ampdamp_qec.api._exceptions import MissingGammaError, UnknownModeError
from ampdamp_qec.api.codes import shor_91
from ampdamp_qec.api.fidelity import gamma_grid, pipeline_fidelity
from ampdamp_qec.api.recovery import shor_damped_sets, shor_recovery


@pytest.fixture(scope="module")
def stabilizer_recovery():
    return shor_recovery()


def test_branch_count():
    assert len(shor_damped_sets()) == 343
    assert len(set(shor_damped_sets())) == 343


def test_element_count(stabilizer_recovery):
    assert len(stabilizer_recovery) == 364
    assert stabilizer_recovery.metadata["collapse_convention"] == "undamaged_block"
    assert "no_damping:++" in stabilizer_recovery.labels
    assert "no_damping:--" in stabilizer_recovery.labels
    assert "damped:1,4" in stabilizer_recovery.labels


def test_recovery_is_complete(stabilizer_recovery):
    assert stabilizer_recovery.completeness_deficit() < 1e-10


def test_single_damping_syndrome(stabilizer_recovery):
    outcome = stabilizer_recovery.element("damped:1:+").syndrome
    assert outcome.damped == (1,)
    assert ("ZZIIIIIII", -1) in outcome.measured
    assert ("IZZIIIIII", 1) in outcome.measured
    assert ("ZIIIIIIII", 1) in outcome.measured
    assert ("IIIXXXXXX", 1) in outcome.measured


def test_first_qubit_distinguishes_mirror_patterns(stabilizer_recovery):
    three = stabilizer_recovery.element("damped:3:+").syndrome.measured
    one_two = stabilizer_recovery.element("damped:1,2:+").syndrome.measured
    assert ("ZIIIIIIII", -1) in three
    assert ("ZIIIIIIII", 1) in one_two


@pytest.mark.slow
def test_infidelity_is_cubic(shor, stabilizer_recovery, slope):
    gammas = np.geomspace(1e-3, 1e-2, 4)
    losses = [1 - pipeline_fidelity(shor, stabilizer_recovery, g, 4)[0] for g in gammas]
    assert slope(gammas, losses) == pytest.approx(3.0, abs=0.2)


@pytest.mark.slow
def test_gamma_dependent_beats_stabilizer_recovery(shor, stabilizer_recovery):
    for gamma in gamma_grid(0.05, 0.3, 6):
        adapted = shor_recovery(RecoveryMode.GAMMA_DEPENDENT, gamma)
        f_stab, _ = pipeline_fidelity(shor, stabilizer_recovery, gamma, 4)
        f_adapted, _ = pipeline_fidelity(shor, adapted, gamma, 4)
        assert f_adapted > f_stab + 1e-9, gamma


@pytest.mark.slow
def test_logical_basis_does_not_change_fidelity(shor, stabilizer_recovery):
    other = shor_91("IXZY")
    f_default, _ = pipeline_fidelity(shor, stabilizer_recovery, 0.1, 4)
    f_other, _ = pipeline_fidelity(other, shor_recovery(code=other), 0.1, 4)
    assert f_default == pytest.approx(f_other, abs=1e-10)


def test_mode_errors():
    with pytest.raises(MissingGammaError):
        shor_recovery(RecoveryMode.GAMMA_DEPENDENT)
    with pytest.raises(UnknownModeError):
        shor_recovery(RecoveryMode.PROJECTION)
