import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ampdamp_qec.api._exceptions import PauliError
from ampdamp_qec.api.pauli import (
    PauliOperator,
    commutes,
    format_pauli,
    iter_by_weight,
    multiply,
    parse,
    to_dense,
)


@st.composite
def paulis(draw, n=None):
    n = n or draw(st.integers(min_value=1, max_value=3))
    x = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    z = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    phase = draw(st.integers(min_value=0, max_value=3))
    return PauliOperator(n=n, x=x, z=z, phase_exp=phase)


@st.composite
def pauli_pairs(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    return draw(paulis(n)), draw(paulis(n))


@given(pauli_pairs())
@settings(max_examples=200, deadline=None)
def test_product_matches_dense_product(pair):
    a, b = pair
    assert np.allclose(to_dense(multiply(a, b)), to_dense(a) @ to_dense(b))


@given(pauli_pairs())
@settings(max_examples=200, deadline=None)
def test_commutation_matches_dense(pair):
    a, b = pair
    da, db = to_dense(a), to_dense(b)
    assert commutes(a, b) == np.allclose(da @ db, db @ da)


@given(paulis())
@settings(max_examples=200, deadline=None)
def test_text_form_parses_back(p):
    assert parse(str(p)) == p


@given(paulis(), st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=100, deadline=None)
def test_apply_matches_dense(p, seed):
    rng = np.random.default_rng(seed)
    state = rng.normal(size=1 << p.n) + 1j * rng.normal(size=1 << p.n)
    assert np.allclose(p.apply(state), to_dense(p) @ state)


def test_phase_prefixes():
    assert parse("+iXY").phase_exp == 1
    assert parse("-ZZII").phase_exp == 2
    assert parse("-iZ").phase_exp == 3
    assert format_pauli(parse("XZ")) == "XZ"
    assert str(-parse("ZZII")) == "-ZZII"


def test_x_times_z_is_minus_i_y():
    assert str(parse("X") * parse("Z")) == "-iY"
    assert str(parse("Z") * parse("X")) == "+iY"


def test_qubit_one_is_leftmost_letter():
    p = PauliOperator.from_sites(4, {1: "X", 3: "Z"})
    assert str(p) == "XIZI"
    assert p.letter(1) == "X"
    assert p.support == (1, 3)
    assert p.weight == 2


def test_hermitian_and_identity():
    assert parse("-XY").is_hermitian
    assert not parse("+iXY").is_hermitian
    assert PauliOperator.identity(3).is_identity


@pytest.mark.parametrize("text,n", [("ABC", None), ("XX", 3), ("", None), ("i-X", None)])
def test_parse_rejects(text, n):
    with pytest.raises(PauliError):
        parse(text, n)


def test_product_of_different_lengths_fails():
    with pytest.raises(PauliError):
        multiply(parse("XX"), parse("XXX"))


def test_iter_by_weight_order():
    ops = [str(p) for p in iter_by_weight(2)]
    assert len(ops) == 15
    assert ops[:6] == ["IZ", "IX", "IY", "ZI", "XI", "YI"]
    assert ops[6] == "ZZ"


def test_iter_by_weight_other_alphabet():
    assert [str(p) for p in iter_by_weight(1, "IXZY")] == ["X", "Z", "Y"]
    with pytest.raises(PauliError):
        list(iter_by_weight(2, "XIZY"))
