import numpy as np
import pytest

from ampdamp_qec.api._enums import GammaSpacing
from ampdamp_qec.api._exceptions import DimensionMismatchError, QECError, QECUsageError
from ampdamp_qec.api._responses import FidelityPoint, format_number
from ampdamp_qec.api.codes import get_code, leung_41, pair_code
from ampdamp_qec.api.damping import discarded_weight, kron_kraus, single_qubit_kraus
from ampdamp_qec.api.fidelity import (
    baseline_unencoded,
    entanglement_fidelity,
    evaluate_point,
    gamma_grid,
    pipeline_fidelity,
    recovery_factory,
    repeated_block_fidelity,
    resolve_truncation,
    sweep,
    syndrome_contributions,
)
from ampdamp_qec.api.recovery import build_recovery, hamming73_recovery, leung41_recovery, pair_code_recovery


def test_identity_channel_has_unit_fidelity():
    rho = np.eye(4) / 4
    assert entanglement_fidelity(rho, [np.eye(4)]) == pytest.approx(1.0)


def test_single_qubit_baseline():
    rho = np.eye(2) / 2
    value = entanglement_fidelity(rho, single_qubit_kraus(0.2))
    assert value == pytest.approx(0.89721, abs=1e-5)
    assert value == pytest.approx(baseline_unencoded(1, 0.2))


def test_fidelity_is_multiplicative_on_products():
    gamma = 0.15
    rho = np.eye(4) / 4
    kraus = [kron_kraus(2, damped, gamma) for damped in [(), (1,), (2,), (1, 2)]]
    single = entanglement_fidelity(np.eye(2) / 2, single_qubit_kraus(gamma))
    assert entanglement_fidelity(rho, kraus) == pytest.approx(single ** 2)
    assert baseline_unencoded(2, gamma) == pytest.approx(single ** 2)


def test_density_matrix_checks():
    with pytest.raises(QECError):
        entanglement_fidelity(np.eye(2), [np.eye(2)])
    with pytest.raises(QECError):
        entanglement_fidelity(np.diag([1.5, -0.5]), [np.eye(2)])
    with pytest.raises(DimensionMismatchError):
        entanglement_fidelity(np.eye(2) / 2, [np.eye(4)])
    with pytest.raises(DimensionMismatchError):
        entanglement_fidelity(np.ones((2, 3)), [])


def test_repeated_blocks():
    assert repeated_block_fidelity(0.9, 3) == pytest.approx(0.729)


def test_resolve_truncation():
    assert resolve_truncation(8) is None
    assert resolve_truncation(9) == 4
    assert resolve_truncation(9, exact=True) is None
    assert resolve_truncation(6, 2) == 2


@pytest.mark.parametrize(
    "code,recovery",
    [
        (leung_41, leung41_recovery),
        (lambda: pair_code(2), lambda: pair_code_recovery(2)),
        (lambda: pair_code(3), lambda: pair_code_recovery(3)),
    ],
)
def test_no_damping_gives_unit_fidelity(code, recovery):
    fidelity, bound = pipeline_fidelity(code(), recovery(), 0.0)
    assert fidelity == pytest.approx(1.0, abs=1e-12)
    assert bound == 0.0


def test_hamming_no_damping(hamming):
    fidelity, _ = pipeline_fidelity(hamming, hamming73_recovery(), 0.0)
    assert fidelity == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("gamma", [0.1, 0.3, 0.5])
@pytest.mark.parametrize(
    "name", ["leung41", "pair:1", "pair:2", "pair:3", "hamming73", "gottesman83"]
)
def test_truncation_bound_brackets_exact(name, gamma):
    code = get_code(name)
    recovery = build_recovery(name)
    exact, no_bound = pipeline_fidelity(code, recovery, gamma)
    assert no_bound == 0.0
    for order in (1, 2, 3):
        truncated, bound = pipeline_fidelity(code, recovery, gamma, truncation=order)
        assert bound > 0
        assert truncated <= exact + 1e-12, order
        assert exact <= truncated + bound + 1e-12, order


def test_default_truncation_bound_for_ten_qubits():
    code = pair_code(4)
    order = resolve_truncation(code.n)
    assert order == 4
    point = evaluate_point(code, pair_code_recovery(4), 0.1, truncation=order)
    assert point.truncation_order == 4
    assert 0 < point.truncation_bound < 1e-4
    assert point.truncation_bound == pytest.approx(discarded_weight(10, 0.1, 4))


def test_dimension_mismatch(leung):
    with pytest.raises(DimensionMismatchError):
        pipeline_fidelity(leung, pair_code_recovery(2), 0.1)


def test_contributions_sum_to_fidelity():
    code = pair_code(3)
    recovery = pair_code_recovery(3)
    report = syndrome_contributions(code, recovery, 0.1)
    fidelity, _ = pipeline_fidelity(code, recovery, 0.1)
    assert report.total == pytest.approx(fidelity, abs=1e-12)
    assert sorted(report.by_order) == list(range(9))
    assert all(report.by_order[order] > 0 for order in (0, 1, 2))
    assert report.by_order[3] < report.by_order[2]


def test_hamming_second_order_contributes_nothing(hamming):
    report = syndrome_contributions(hamming, hamming73_recovery(), 0.2)
    assert report.by_order[2] == pytest.approx(0.0, abs=1e-12)
    assert report.by_order[1] > 0


@pytest.mark.parametrize(
    "code,recovery,expected",
    [
        (leung_41, leung41_recovery, 2.0),
        (lambda: pair_code(2), lambda: pair_code_recovery(2), 2.0),
    ],
)
def test_infidelity_is_quadratic(code, recovery, expected, slope):
    gammas = np.geomspace(1e-3, 1e-2, 5)
    code, recovery = code(), recovery()
    losses = [1 - pipeline_fidelity(code, recovery, g)[0] for g in gammas]
    assert slope(gammas, losses) == pytest.approx(expected, abs=0.15)


def test_hamming_infidelity_is_quadratic(hamming, slope):
    gammas = np.geomspace(1e-3, 1e-2, 4)
    recovery = hamming73_recovery()
    losses = [1 - pipeline_fidelity(hamming, recovery, g)[0] for g in gammas]
    assert slope(gammas, losses) == pytest.approx(2.0, abs=0.15)


def test_unencoded_infidelity_is_linear(slope):
    gammas = np.geomspace(1e-3, 1e-2, 5)
    losses = [1 - baseline_unencoded(1, g) for g in gammas]
    assert slope(gammas, losses) == pytest.approx(1.0, abs=0.1)


@pytest.mark.parametrize(
    "name,coefficient",
    [("leung41", 1.75), ("pair:3", 5.75), ("hamming73", 5.625)],
)
def test_leading_infidelity_coefficient(name, coefficient):
    gamma = 1e-3
    code = get_code(name)
    fidelity, _ = pipeline_fidelity(code, build_recovery(name), gamma)
    assert (1 - fidelity) / gamma ** 2 == pytest.approx(coefficient, rel=0.02)


def _nonincreasing(values) -> bool:
    return all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


@pytest.mark.parametrize(
    "name", ["leung41", "pair:1", "pair:2", "pair:3", "hamming73", "gottesman83"]
)
def test_fidelity_decreases_with_gamma(name):
    code = get_code(name)
    recovery = build_recovery(name)
    values = [pipeline_fidelity(code, recovery, g)[0] for g in gamma_grid(0.0, 0.5, 51)]
    assert _nonincreasing(values)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["pair:4", "shor91"])
def test_long_codes_decrease_with_gamma(name):
    code = get_code(name)
    recovery = build_recovery(name)
    values = [pipeline_fidelity(code, recovery, g)[0] for g in gamma_grid(0.0, 0.5, 11)]
    assert _nonincreasing(values)


@pytest.mark.parametrize(
    "name,top", [("leung41", 0.2), ("pair:1", 0.2), ("pair:2", 0.1), ("hamming73", 0.1)]
)
def test_codes_stay_above_unencoded(name, top):
    code = get_code(name)
    recovery = build_recovery(name)
    for gamma in gamma_grid(0.01, top, int(round(top / 0.01))):
        fidelity, _ = pipeline_fidelity(code, recovery, gamma)
        assert fidelity >= baseline_unencoded(code.k, gamma), gamma


def test_codes_beat_unencoded_at_small_gamma(leung, hamming):
    for gamma in (0.05, 0.1):
        assert pipeline_fidelity(leung, leung41_recovery(), gamma)[0] > baseline_unencoded(1, gamma)
        normalized = pipeline_fidelity(hamming, hamming73_recovery(), gamma)[0] ** (1 / 3)
        assert normalized > baseline_unencoded(1, gamma)


@pytest.mark.slow
def test_hamming_beats_eight_qubit_pair_code(hamming):
    code = pair_code(3)
    pair_recovery = pair_code_recovery(3)
    hamming_recovery = hamming73_recovery()
    for gamma in gamma_grid(0.01, 0.3, 30):
        f_hamming = pipeline_fidelity(hamming, hamming_recovery, gamma)[0]
        f_pair = pipeline_fidelity(code, pair_recovery, gamma)[0]
        assert f_hamming >= f_pair - 1e-12, gamma


def test_evaluate_point_for_repeated_blocks(leung):
    recovery = leung41_recovery()
    single = evaluate_point(leung, recovery, 0.1)
    double = evaluate_point(leung, recovery, 0.1, copies=2, label="leung41^2")
    assert double.code == "leung41^2"
    assert double.k == 2
    assert double.fidelity == pytest.approx(single.fidelity ** 2)
    assert double.normalized_fidelity == pytest.approx(single.fidelity)
    assert double.contributions == {}
    assert single.contributions[0] > single.contributions[1]


def test_gamma_grid():
    assert gamma_grid(0.0, 0.3, 4) == pytest.approx([0.0, 0.1, 0.2, 0.3])
    assert gamma_grid(0.2, 0.2, 1) == [0.2]
    log = gamma_grid(1e-3, 1e-1, 3, GammaSpacing.LOG)
    assert log == pytest.approx([1e-3, 1e-2, 1e-1])
    with pytest.raises(QECUsageError):
        gamma_grid(0.3, 0.1, 3)
    with pytest.raises(QECUsageError):
        gamma_grid(0.0, 0.1, 3, "log")
    with pytest.raises(QECUsageError):
        gamma_grid(0.0, 1.5, 3)


def test_sweep_rebuilds_gamma_dependent_recovery(leung):
    built = []

    def factory(gamma):
        built.append(gamma)
        return build_recovery("leung41", "perturbed", gamma)

    curve = sweep(leung, factory, [0.2, 0.0, 0.1])
    assert curve.gammas == [0.0, 0.1, 0.2]
    assert built == [0.0, 0.1, 0.2]
    assert curve.recovery_mode == "perturbed"
    assert curve.provenance["points"] == 3


def test_sweep_reuses_fixed_recovery(pair2):
    built = []

    def factory(gamma):
        built.append(gamma)
        return pair_code_recovery(2)

    curve = sweep(pair2, factory, gamma_grid(0.0, 0.2, 3))
    assert built == [0.0]
    assert curve.fidelity[0] == pytest.approx(1.0)
    assert curve.k == 2


def test_sweep_rejects_gamma_out_of_range(leung):
    with pytest.raises(QECUsageError):
        sweep(leung, recovery_factory("leung41"), [0.1, 1.2])


def test_fidelity_point_rows():
    point = FidelityPoint(
        gamma=0.1, code="leung41", recovery_mode="projection", k=1,
        fidelity=1.0000000000000002, normalized_fidelity=0.5,
    )
    assert point.fidelity == 1.0
    row = point.to_row()
    assert row["truncation_order"] == "none"
    assert row["gamma"] == "0.1"
    assert format_number(0.1 + 0.2) == "0.3"
