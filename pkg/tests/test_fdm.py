import math

import numpy as np
import numpy.testing as npt
import pytest

from yafet import fdm


def test_degree_two_bubble():
    basis = fdm.fdm_basis_1d(2)
    npt.assert_allclose(basis.eigenvalues, [2.5])
    s, ds = basis.interior(np.array([0.0, 0.5]))
    npt.assert_allclose(s[0], [math.sqrt(15.0 / 16.0),
                               0.75 * math.sqrt(15.0 / 16.0)])
    npt.assert_allclose(ds[0], [0.0, -math.sqrt(15.0 / 16.0)], atol=1e-14)


def test_degree_one_has_no_interior():
    basis = fdm.fdm_basis_1d(1)
    assert basis.num_interior == 0
    values, _ = basis.tabulate(np.array([-1.0, 1.0]))
    npt.assert_allclose(values, np.eye(2))
    assert fdm.orthogonality_residual(basis) == 0.0


def test_invalid_degree():
    with pytest.raises(ValueError):
        fdm.fdm_basis_1d(0)


@pytest.mark.parametrize('p', [3, 5, 8, 12])
def test_orthogonality(p):
    basis = fdm.fdm_basis_1d(p)
    assert basis.num_interior == p - 1
    assert np.all(np.diff(basis.eigenvalues) > 0.0)
    assert fdm.orthogonality_residual(basis) < 1e-11


@pytest.mark.parametrize('p', [16, 20, 24])
def test_orthogonality_high_degree(p):
    basis = fdm.fdm_basis_1d(p)
    assert np.all(np.diff(basis.eigenvalues) > 0.0)
    assert fdm.orthogonality_residual(basis) < 1e-11


def test_legendre_table_orthonormal():
    x, w = fdm._gauss(6)
    phi, _ = fdm.legendre_table(6, x)
    npt.assert_allclose((phi * w) @ phi.T, np.eye(7), atol=1e-13)


def test_hat_gram_entries():
    stiffness, mass = fdm.gram_matrices_1d(fdm.fdm_basis_1d(3))
    npt.assert_allclose(stiffness[:2, :2], [[0.5, -0.5], [-0.5, 0.5]])
    npt.assert_allclose(mass[:2, :2], [[2.0 / 3.0, 1.0 / 3.0],
                                       [1.0 / 3.0, 2.0 / 3.0]])
    npt.assert_allclose(stiffness[:2, 2:], 0.0, atol=1e-13)


@pytest.mark.parametrize('p', [2, 4, 7])
def test_dg_basis_is_dual(p):
    dg = fdm.fdm_dg_basis_1d(p)
    basis = fdm.fdm_basis_1d(p)
    x, _ = fdm._gauss(p)
    _, ds = basis.interior(x)
    expected = np.vstack([np.ones((1, len(x))), ds])
    npt.assert_allclose(dg.tabulate(x), expected, atol=1e-10)
    npt.assert_allclose(dg.apply(dg.nodal_coefficients.T), np.eye(p),
                        atol=1e-12)


def test_dg_basis_fields():
    dg = fdm.fdm_dg_basis_1d(3)
    assert dg._fields == ('degree', 'weights', 'nodal_coefficients')
    assert dg.weights.shape == (3, 3)


def test_tensor_sparsity_degree_two():
    counts = fdm.tensor_sparsity_2d(2)
    assert counts.dim == 9
    assert counts.nnz_mass == 81
    assert counts.nnz_stiffness == 65


def test_tensor_sparsity_needs_degree_two():
    with pytest.raises(ValueError):
        fdm.tensor_sparsity_2d(1)
