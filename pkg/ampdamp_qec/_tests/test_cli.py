import json

import pytest

from ampdamp_qec.cli import run


def test_codes_list(capsys):
    assert run(["codes", "list"]) == 0
    out = capsys.readouterr().out
    assert "leung41\t[4,1] amplitude damping code" in out
    assert len(out.splitlines()) == 8


def test_codes_show(capsys):
    assert run(["codes", "show", "leung41"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "leung41 [4,1]", "XXXX", "ZZII", "IIZZ", "X1: XXII", "Z1: ZIZI",
    ]


def test_codes_from_parity_check(capsys):
    assert run(["codes", "from-parity-check", "--matrix", "0001111;0110011;1010101"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "parity:7,3 [7,3]"


def test_codes_from_parity_check_file(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text("# Hamming\n0 0 0 1 1 1 1\n0 1 1 0 0 1 1\n1 0 1 0 1 0 1\n")
    assert run(["codes", "from-parity-check", "--file", str(path), "--name", "h7"]) == 0
    assert capsys.readouterr().out.startswith("h7 [7,3]")


def test_bad_parity_check_exits_with_failure(capsys):
    assert run(["codes", "from-parity-check", "--matrix", "110;011"]) == 1
    assert capsys.readouterr().err.startswith("error: ")


def test_damped_subspace(capsys):
    assert run(["damped-subspace", "--code", "leung41", "--qubits", "1"]) == 0
    assert capsys.readouterr().out == "-ZZII / IIZZ / ZIII\n"


def test_kl_check(capsys):
    assert run(["kl-check", "--code", "shor91", "--errors", "dampings:2"]) == 0
    assert capsys.readouterr().out.startswith("correctable: true")
    assert run(["kl-check", "--code", "leung41", "--errors", "dampings:2"]) == 1
    assert capsys.readouterr().out.startswith("correctable: false")


def test_fidelity_csv(capsys):
    argv = ["fidelity", "--code", "pair:2", "--gamma-min", "0", "--gamma-max", "0", "--steps", "1"]
    assert run(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [
        "gamma,code,recovery_mode,k,fidelity,normalized_fidelity,truncation_order,truncation_bound",
        "0.0,pair:2,projection,2,1.0,1.0,none,0.0",
    ]


def test_fidelity_is_deterministic(capsys):
    argv = ["fidelity", "--code", "leung41", "--recovery", "perturbed", "--gamma-max", "0.2", "--steps", "3"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    assert len(first.splitlines()) == 4


def test_fidelity_json(tmp_path):
    out = tmp_path / "curve.json"
    argv = [
        "fidelity", "--code", "hamming73", "--gamma-max", "0.1", "--steps", "2",
        "--format", "json", "--out", str(out),
    ]
    assert run(argv) == 0
    document = json.loads(out.read_text())
    records = document["points"]
    assert [r["gamma"] for r in records] == [0.0, 0.1]
    assert set(records[1]["contributions"]) == {str(order) for order in range(8)}
    assert document["run"]["codes"] == ["hamming73"]
    assert document["run"]["gamma_range"] == {
        "gamma_min": 0.0, "gamma_max": 0.1, "steps": 2, "spacing": "linear",
    }
    assert document["run"]["output_format"] == "json"
    assert "truncation" not in document["run"]


def test_truncate_none_selects_full_channel(capsys):
    argv = [
        "fidelity", "--code", "leung41", "--recovery", "projection",
        "--gamma-min", "0", "--gamma-max", "0.1", "--steps", "2",
    ]
    assert run(argv + ["--truncate", "none"]) == 0
    untruncated = capsys.readouterr().out
    assert run(argv + ["--exact"]) == 0
    assert capsys.readouterr().out == untruncated
    assert run(argv + ["--truncate", "1"]) == 0
    truncated = capsys.readouterr().out
    assert truncated != untruncated
    assert untruncated.splitlines()[2].endswith(",none,0.0")
    assert truncated.splitlines()[2].split(",")[6] == "1"


def test_contributions_truncate_none(capsys):
    argv = ["contributions", "--code", "hamming73", "--gamma", "0.1"]
    assert run(argv + ["--truncate", "none"]) == 0
    orders = [line.split(",")[0] for line in capsys.readouterr().out.splitlines()[1:-1]]
    assert orders == [str(order) for order in range(8)]
    assert run(argv + ["--truncate", "1"]) == 0
    orders = [line.split(",")[0] for line in capsys.readouterr().out.splitlines()[1:-1]]
    assert orders == ["0", "1"]


def test_compare_adds_baseline(capsys):
    argv = ["compare", "--codes", "leung41,pair:1", "--gamma-max", "0.1", "--steps", "2", "--normalize"]
    assert run(argv) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert [row.split(",")[1] for row in rows] == [
        "leung41", "leung41", "pair:1", "pair:1", "unencoded:1", "unencoded:1",
    ]


def test_compare_takes_a_mode_per_code(capsys):
    argv = [
        "compare", "--codes", "leung41@sweep_optimized,gottesman83@adapted_stabilizer,pair:1",
        "--gamma-max", "0.1", "--steps", "2",
    ]
    assert run(argv) == 0
    rows = [row.split(",") for row in capsys.readouterr().out.splitlines()[1:]]
    assert [(row[1], row[2]) for row in rows[:6]] == [
        ("leung41", "sweep_optimized"), ("leung41", "sweep_optimized"),
        ("gottesman83", "adapted_stabilizer"), ("gottesman83", "adapted_stabilizer"),
        ("pair:1", "projection"), ("pair:1", "projection"),
    ]


def test_contributions(capsys):
    assert run(["contributions", "--code", "leung41", "--gamma", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "order,contribution"
    assert lines[1] == "0,1.0"
    assert lines[-1] == "total,1.0"


def test_recovery_show(capsys):
    assert run(["recovery", "show", "--code", "leung41"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "leung41 mode=projection elements=10"
    assert out[1].startswith("R1:no_damping:+")
    assert out[-1].startswith("completeness_deficit")


@pytest.mark.parametrize(
    "kind,extra,golden_name",
    [
        ("encode", [], "pair2_encode.txt"),
        ("recovery", ["--damped", "5,1"], "pair2_recovery_1_5.txt"),
        ("syndrome:z_pairs", [], "pair2_z_pairs.txt"),
    ],
)
def test_emit_circuit(tmp_path, golden, kind, extra, golden_name):
    out = tmp_path / "circuit.txt"
    assert run(["emit-circuit", "--code", "pair:2", "--kind", kind, "--out", str(out)] + extra) == 0
    assert out.read_text() == golden(golden_name)


@pytest.mark.parametrize(
    "argv",
    [
        ["fidelity", "--code", "steane"],
        ["fidelity", "--code", "shor91", "--recovery", "projection"],
        ["fidelity", "--code", "leung41", "--gamma-max", "2"],
        ["fidelity", "--code", "leung41", "--truncate", "all"],
        ["contributions", "--code", "leung41", "--gamma", "0.1", "--truncate", "-1"],
        ["compare", "--codes", "leung41@stabilizer"],
        ["kl-check"],
        ["kl-check", "--code", "leung41", "--errors", "paulis:1"],
        ["emit-circuit", "--code", "hamming73", "--kind", "encode"],
        ["emit-circuit", "--code", "pair:2", "--kind", "recovery"],
        ["nope"],
    ],
)
def test_usage_errors_exit_with_two(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_unsupported_stage_is_a_failure(capsys):
    assert run(["emit-circuit", "--code", "hamming73", "--kind", "syndrome:z_pairs"]) == 1
