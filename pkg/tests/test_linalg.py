import numpy as np
import numpy.testing as npt
import pytest
import scipy.linalg

from yafet import linalg


def test_invert_identity():
    npt.assert_allclose(linalg.invert(np.eye(4)), np.eye(4))


def test_invert_2x2():
    a = np.array([[4.0, 7.0], [2.0, 6.0]])
    expected = np.array([[0.6, -0.7], [-0.2, 0.4]])
    npt.assert_allclose(linalg.invert(a), expected, atol=1e-15)


def test_invert_hilbert():
    h = scipy.linalg.hilbert(4)
    npt.assert_allclose(linalg.invert(h), scipy.linalg.invhilbert(4),
                        rtol=1e-9)


def test_singular_matrix_names_pivot():
    with pytest.raises(linalg.SingularMatrixError) as excinfo:
        linalg.lu_factor([[1.0, 2.0], [2.0, 4.0]])
    assert excinfo.value.pivot == 1
    assert isinstance(excinfo.value, linalg.NumericalError)


def test_lu_solve_transpose():
    a = np.array([[2.0, 1.0, 0.0], [0.0, 3.0, 1.0], [1.0, 0.0, 4.0]])
    x = np.array([1.0, -2.0, 0.5])
    factor = linalg.lu_factor(a)
    npt.assert_allclose(linalg.lu_solve(factor, a @ x), x)
    npt.assert_allclose(linalg.lu_solve(factor, a.T @ x, transpose=True), x)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        linalg.lu_factor(np.ones((2, 3)))


def test_condition_diagonal():
    assert linalg.condition_2norm(np.diag([1.0, 10.0])) == pytest.approx(10.0)


def test_condition_singular_is_inf():
    assert linalg.condition_2norm(np.zeros((2, 2))) == float('inf')


def test_sym_eig():
    w, q = linalg.sym_eig([[2.0, 1.0], [1.0, 2.0]])
    npt.assert_allclose(w, [1.0, 3.0])
    npt.assert_allclose(q.T @ q, np.eye(2), atol=1e-15)


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(ValueError):
        linalg.sym_eig([[1.0, 2.0], [0.0, 1.0]])


def test_generalized_sym_eig():
    k = np.diag([2.0, 6.0])
    m = np.diag([1.0, 2.0])
    w, v = linalg.generalized_sym_eig(k, m)
    npt.assert_allclose(w, [2.0, 3.0])
    npt.assert_allclose(v.T @ m @ v, np.eye(2), atol=1e-15)
    npt.assert_allclose(v.T @ k @ v, np.diag(w), atol=1e-14)


def test_cholesky_not_positive_definite():
    with pytest.raises(linalg.NotPositiveDefiniteError):
        linalg.cholesky([[1.0, 2.0], [2.0, 1.0]])


def test_tridiagonal_eig():
    w, _ = linalg.sym_tridiagonal_eig([2.0, 2.0, 2.0], [-1.0, -1.0])
    expected = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, 4) / 4.0)
    npt.assert_allclose(w, expected)


def test_spanning_basis_rank():
    rows = [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 1.0]]
    basis = linalg.spanning_basis(rows)
    assert basis.shape == (2, 3)
    npt.assert_allclose(basis @ basis.T, np.eye(2), atol=1e-14)
