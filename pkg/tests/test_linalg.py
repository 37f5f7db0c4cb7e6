import numpy as np
import pytest
from hypothesis import given, strategies as st

from twolevel.errors import NormalizationError
from twolevel.linalg import (
    E0,
    E1,
    IDENTITY,
    SIGMA_X,
    dagger,
    det,
    frob_distance,
    is_unitary,
    mat_mul,
    matrix_element,
    project_unitary,
    su2_exp,
    unitarity_defect,
)

angles = st.floats(-10, 10, allow_nan=False)


def _unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    return v / n if n > 1e-3 else np.array([0.0, 0.0, 1.0])


vectors = st.tuples(angles, angles, angles).map(_unit)


def random_su2(angle, axis):
    return su2_exp(angle, axis)


def test_identity_product():
    assert np.allclose(mat_mul(IDENTITY, IDENTITY), IDENTITY)


def test_sigma_x_square_root():
    u = su2_exp(np.pi / 4, [1, 0, 0])
    assert np.allclose(mat_mul(u, u), -1j * SIGMA_X, atol=1e-14)


def test_frob_examples():
    assert frob_distance(IDENTITY, IDENTITY) == 0.0
    assert frob_distance(IDENTITY, -IDENTITY) == pytest.approx(np.sqrt(8))


def test_basis_matrix_elements():
    assert matrix_element(E0, IDENTITY, E0) == 1
    assert matrix_element(E1, IDENTITY, E0) == 0


def test_matrix_element_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        matrix_element(2 * E0, IDENTITY, E0)


def test_mat_mul_rejects_nan():
    bad = IDENTITY.copy()
    bad[0, 1] = np.nan
    with pytest.raises(ValueError):
        mat_mul(bad, IDENTITY)


@given(angles, vectors)
def test_su2_is_unitary(angle, axis):
    u = su2_exp(angle, axis)
    assert is_unitary(u)
    assert abs(abs(det(u)) - 1) < 1e-12
    assert np.allclose(mat_mul(u, dagger(u)), IDENTITY, atol=1e-12)


@given(angles, vectors, angles, vectors, angles, vectors)
def test_associativity(a1, n1, a2, n2, a3, n3):
    a, b, c = su2_exp(a1, n1), su2_exp(a2, n2), su2_exp(a3, n3)
    lhs = mat_mul(mat_mul(a, b), c)
    rhs = mat_mul(a, mat_mul(b, c))
    assert frob_distance(lhs, rhs) < 1e-12


@given(angles, vectors, angles, angles)
def test_matrix_element_adjoint(angle, axis, p, q):
    u = su2_exp(angle, axis)
    bra = np.array([np.cos(p), np.exp(1j * q) * np.sin(p)])
    ket = np.array([np.exp(-1j * p) * np.sin(q), np.cos(q)])
    lhs = matrix_element(bra, u, ket)
    rhs = np.conj(matrix_element(ket, dagger(u), bra))
    assert abs(lhs - rhs) < 1e-12


def test_frob_symmetric():
    a = su2_exp(0.3, [0, 1, 0])
    b = su2_exp(1.1, [1, 0, 0])
    assert frob_distance(a, b) == pytest.approx(frob_distance(b, a))


def test_project_unitary_restores():
    u = su2_exp(0.7, [0.6, 0, 0.8]) * (1 + 1e-6)
    assert unitarity_defect(u) > 1e-7
    assert unitarity_defect(project_unitary(u)) < 1e-14


def test_stacked_distance_shape():
    stack = np.stack([IDENTITY, -IDENTITY, IDENTITY])
    d = frob_distance(stack, IDENTITY)
    assert d.shape == (3,)
    assert d[1] == pytest.approx(np.sqrt(8))
