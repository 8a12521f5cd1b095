import pytest

from ampdamp_qec.api._enums import RecoveryMode
from ampdamp_qec.api._exceptions import UnknownCodeError, UnknownModeError
from ampdamp_qec.api.recovery import (
    RECOVERY_REGISTRY,
    build_recovery,
    check_mode,
    default_mode,
    supported_modes,
)


def test_every_code_has_a_recovery():
    assert set(RECOVERY_REGISTRY) == {
        "leung41", "pair:1", "pair:2", "pair:3", "pair:4", "hamming73", "gottesman83", "shor91",
    }


@pytest.mark.parametrize(
    "code,mode",
    [
        ("leung41", RecoveryMode.PROJECTION),
        ("pair:2", RecoveryMode.PROJECTION),
        ("gottesman83", RecoveryMode.GENERIC_STABILIZER),
        ("shor91", RecoveryMode.STABILIZER),
    ],
)
def test_default_modes(code, mode):
    assert default_mode(code) == mode
    assert check_mode(code, None) == mode


def test_supported_modes():
    assert RecoveryMode.SWEEP_OPTIMIZED in supported_modes("leung41")
    assert RecoveryMode.SWEEP_OPTIMIZED not in supported_modes("pair:2")
    assert supported_modes("leung41^2") == supported_modes("leung41")


def test_check_mode_errors():
    with pytest.raises(UnknownModeError):
        check_mode("shor91", "projection")
    with pytest.raises(UnknownModeError):
        check_mode("pair:2", "bogus")
    with pytest.raises(UnknownCodeError):
        check_mode("steane", None)


def test_build_recovery_passes_gamma_only_when_needed():
    projection = build_recovery("pair:1", "projection", 0.3)
    assert projection.gamma is None
    perturbed = build_recovery("pair:1", "perturbed", 0.3)
    assert perturbed.gamma == pytest.approx(0.3)
    assert build_recovery("leung41^2").code == "leung41"
