from pathlib import Path

import numpy as np
import pytest

from ampdamp_qec.api.codes import hamming_73, leung_41, pair_code, shor_91
from ampdamp_qec.api.stabilizer import codewords

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden():
    def read(name: str) -> str:
        return (GOLDEN / name).read_text(encoding="utf-8")
    return read


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def leung():
    return leung_41()


@pytest.fixture
def pair2():
    return pair_code(2)


@pytest.fixture
def hamming():
    return hamming_73()


@pytest.fixture(scope="session")
def shor():
    return shor_91()


@pytest.fixture
def random_states(rng):
    def make(n: int, count: int) -> np.ndarray:
        states = rng.normal(size=(count, 1 << n)) + 1j * rng.normal(size=(count, 1 << n))
        return states / np.linalg.norm(states, axis=1, keepdims=True)
    return make


def log_slope(gammas, infidelities) -> float:
    slope, _ = np.polyfit(np.log(gammas), np.log(infidelities), 1)
    return float(slope)


@pytest.fixture
def slope():
    return log_slope


@pytest.fixture
def v_of():
    return codewords
