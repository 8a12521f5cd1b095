from ampdamp_qec.config import QECConfig


def test_defaults():
    config = QECConfig()
    assert config.dense_qubit_limit == 12
    assert config.default_truncation(8) is None
    assert config.default_truncation(9) == 4


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("QEC_MAX_WORKERS", "7")
    monkeypatch.setenv("QEC_LARGE_TRUNCATION_ORDER", "3")
    config = QECConfig()
    assert config.max_workers == 7
    assert config.default_truncation(10) == 3


def test_debug_switch():
    assert QECConfig(log_level="info").effective_log_level == "INFO"
    assert QECConfig(debug=True).effective_log_level == "DEBUG"
