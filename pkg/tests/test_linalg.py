import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import dense_projectors
from qsearch.errors import InvalidInputError
from qsearch.linalg import (
    MAX_DENSE_DIM,
    as_operator,
    commutator,
    hermitian_expm,
    is_hermitian,
    is_unitary,
    operator_norm,
    unitary_distance,
)


def test_norm_of_identity_and_zero():
    for d in (1, 3, 16):
        assert operator_norm(np.eye(d)) == pytest.approx(1.0, abs=1e-15)
        assert operator_norm(np.zeros((d, d))) == 0.0


def test_commutator_norm_n2():
    h0, hf = dense_projectors(2)
    assert operator_norm(commutator(h0, hf)) == pytest.approx(math.sqrt(3) / 4, abs=1e-14)
    assert math.sqrt(3) / 4 == pytest.approx(0.4330127, abs=1e-7)


def test_non_finite_rejected():
    bad = np.eye(2)
    bad[0, 1] = np.nan
    with pytest.raises(InvalidInputError):
        operator_norm(bad)
    with pytest.raises(InvalidInputError):
        as_operator(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        as_operator(np.zeros((MAX_DENSE_DIM + 1, 1)))


def test_expm_examples():
    assert np.allclose(hermitian_expm(np.zeros((3, 3)), 2.7), np.eye(3), atol=1e-15)
    out = hermitian_expm(np.diag([0.0, 1.0]), math.pi)
    assert np.allclose(out, np.diag([1.0, -1.0]), atol=1e-15)
    h0, hf = dense_projectors(2, marked=1)
    col = hermitian_expm(h0 + hf, math.pi) @ np.full(4, 0.5)
    assert abs(col[1]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_expm_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        hermitian_expm(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


def test_expm_matches_scipy(rng):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = a + a.conj().T
    u = hermitian_expm(h, 0.37)
    assert np.allclose(u, expm(-1j * 0.37 * h), atol=1e-12)
    assert is_unitary(u)


def test_distance_examples():
    u = hermitian_expm(np.diag([0.2, 1.0]), 1.3)
    assert unitary_distance(u, u) == 0.0
    assert unitary_distance(np.eye(4), -np.eye(4)) == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(InvalidInputError):
        unitary_distance(np.eye(2), np.eye(3))


def test_splitting_distance_n3():
    # frozen from scipy.linalg.expm on the explicit projectors
    h0, hf = dense_projectors(3)
    dt = 0.1
    d = unitary_distance(hermitian_expm(h0 + hf, dt), hermitian_expm(h0, dt) @ hermitian_expm(hf, dt))
    assert d == pytest.approx(0.0016530204969321079, rel=1e-9)
    assert 0 < d <= operator_norm(commutator(h0, hf)) * dt**2


def test_flags():
    assert is_hermitian(np.array([[1.0, 1j], [-1j, 2.0]]))
    assert not is_hermitian(np.array([[1.0, 1j], [1j, 2.0]]))
    assert not is_unitary(2 * np.eye(2))


matrices = st.integers(1, 16).flatmap(
    lambda d: st.tuples(
        st.just(d),
        st.integers(0, 2**32 - 1),
    )
)


@given(matrices)
def test_norm_submultiplicative_and_triangle(case):
    d, seed = case
    r = np.random.default_rng(seed)
    a = r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))
    b = r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))
    na, nb = operator_norm(a), operator_norm(b)
    assert operator_norm(a @ b) <= na * nb * (1 + 1e-12)
    assert operator_norm(a + b) <= (na + nb) * (1 + 1e-12)
