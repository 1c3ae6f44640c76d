# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Fast-diagonalization bases on ``[-1, 1]``.

The interior functions of the degree ``p`` continuous basis solve the
generalized eigenproblem ``K c = lambda M c`` on the bubble space, so they
are orthonormal in L2 and orthogonal in H1 with ``(s_i', s_j') = lambda_i
delta_ij``. Two hat functions complete the basis. The matching
discontinuous basis of degree ``p - 1`` is dual to moments against
``{1} U {s_i'}``.

Functions are stored as coefficients over the orthonormal Legendre basis of
``[-1, 1]``, obtained from the expansion set on ``[0, 1]`` by the change of
variable ``t = (x + 1) / 2``.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from . import (
    elements,
    linalg,
    polyset,
    quadrature,
    refcell,
    ty,
)


logger = logging.getLogger()


SPARSITY_THRESHOLD = 1e-10


def legendre_table(p: int,
                   x: ty.ArrayLike,
                   ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    Values and derivatives of the ``p + 1`` orthonormal Legendre
    polynomials on ``[-1, 1]`` at ``x``, each of shape ``(p + 1, npoints)``.
    """
    pts = np.asarray(x, dtype=np.float64).reshape(-1)
    eset = polyset.ExpansionSet(refcell.make_cell(1), p)
    table = eset.tabulate(0.5 * (pts[:, None] + 1.0), order=1)
    scale = 1.0 / math.sqrt(2.0)
    return table[(0,)] * scale, table[(1,)] * (0.5 * scale)


def _gauss(p: int) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    # exact to degree 2p + 1
    return quadrature.gauss_jacobi(0.0, 0.0, p + 1)


class FdmBasis1D(ty.NamedTuple):
    degree: int
    eigenvalues: ty.FloatArray
    coefficients: ty.FloatArray
    """Interior functions over the Legendre basis, shape ``(p - 1, p + 1)``."""

    @property
    def num_interior(self) -> int:
        return int(self.eigenvalues.shape[0])

    def interior(self, x: ty.ArrayLike) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
        """
        Values and derivatives of the interior functions at ``x``.
        """
        phi, dphi = legendre_table(self.degree, x)
        return self.coefficients @ phi, self.coefficients @ dphi

    def tabulate(self, x: ty.ArrayLike) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
        """
        Values and derivatives of the whole basis at ``x``: the left hat, the
        right hat, then the interior functions.
        """
        pts = np.asarray(x, dtype=np.float64).reshape(-1)
        s, ds = self.interior(pts)
        hats = np.stack([0.5 * (1.0 - pts), 0.5 * (1.0 + pts)])
        dhats = np.stack([np.full_like(pts, -0.5), np.full_like(pts, 0.5)])
        return np.concatenate([hats, s]), np.concatenate([dhats, ds])


def fdm_basis_1d(p: int) -> FdmBasis1D:
    if p < 1:
        msg = f'fdm degree must be at least 1, got {p}'
        raise ValueError(msg)
    if p == 1:
        return FdmBasis1D(1, np.zeros(0), np.zeros((0, 2)))

    x, w = _gauss(p)
    phi, dphi = legendre_table(p, x)
    bubble = 1.0 - x * x
    pre = bubble * phi[:p - 1]
    dpre = -2.0 * x * phi[:p - 1] + bubble * dphi[:p - 1]
    mass = (pre * w) @ pre.T
    stiffness = (dpre * w) @ dpre.T
    lam, vecs = linalg.generalized_sym_eig(stiffness, mass)

    gaps = np.diff(lam)
    if lam.size and (lam[0] <= 0.0 or np.any(gaps <= 1e-12 * lam[-1])):
        logger.warning(f'fdm degree {p}: eigenvalues not simple and positive')

    # Fix signs: the largest pre-basis coefficient of each vector is positive.
    pivots = np.argmax(np.abs(vecs), axis=0)
    vecs = vecs * np.sign(vecs[pivots, np.arange(vecs.shape[1])])
    values = vecs.T @ pre
    coeffs = (values * w) @ phi.T
    lam.setflags(write=False)
    coeffs.setflags(write=False)
    return FdmBasis1D(p, lam, coeffs)


def gram_matrices_1d(basis: FdmBasis1D) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    Stiffness and mass matrices of the whole 1D basis, ordered as in
    :meth:`FdmBasis1D.tabulate`.
    """
    x, w = _gauss(basis.degree)
    v, dv = basis.tabulate(x)
    return (dv * w) @ dv.T, (v * w) @ v.T


def orthogonality_residual(basis: FdmBasis1D) -> float:
    """
    Largest deviation from L2 orthonormality, from H1 orthogonality with
    the eigenvalues on the diagonal, and from vanishing endpoint values.
    """
    if basis.num_interior == 0:
        return 0.0
    stiffness, mass = gram_matrices_1d(basis)
    k = stiffness[2:, 2:]
    m = mass[2:, 2:]
    s_ends, _ = basis.interior(np.array([-1.0, 1.0]))
    scale = max(1.0, float(np.max(basis.eigenvalues)))
    return max(
        float(np.max(np.abs(m - np.eye(basis.num_interior)))),
        float(np.max(np.abs(k - np.diag(basis.eigenvalues)))) / scale,
        float(np.max(np.abs(s_ends))),
    )


class FdmDgBasis1D(ty.NamedTuple):
    degree: int
    weights: ty.FloatArray
    """Moment weights over the Legendre basis of degree ``degree``. Row i is
    functional i, so this is also the Vandermonde matrix of the basis."""
    nodal_coefficients: ty.FloatArray

    def tabulate(self, x: ty.ArrayLike) -> ty.FloatArray:
        phi, _ = legendre_table(self.degree, x)
        return np.asarray(self.nodal_coefficients @ phi)

    def apply(self, coeffs: ty.ArrayLike) -> ty.FloatArray:
        """
        The functionals applied to a function with Legendre coefficients
        ``coeffs``.
        """
        return np.asarray(self.weights @ np.asarray(coeffs, dtype=np.float64))


def fdm_dg_basis_1d(p: int) -> FdmDgBasis1D:
    """
    Basis of ``P_{p-1}`` dual to ``v -> (1/2) int v`` and
    ``v -> (1/lambda_i) int v s_i'``. With this scaling the Vandermonde
    matrix against ``{1} U {s_i'}`` is the identity, so those functions are
    the nodal basis.
    """
    basis = fdm_basis_1d(p)
    n = p - 1
    x, w = _gauss(p)
    phi, _ = legendre_table(n, x)
    _, ds = basis.interior(x)
    weights = np.zeros((p, p))
    weights[0] = (0.5 * w) @ phi.T
    if basis.num_interior:
        weights[1:] = ((ds / basis.eigenvalues[:, None]) * w) @ phi.T
    try:
        vinv = linalg.invert(weights)
    except linalg.SingularMatrixError as e:
        msg = f'unisolvence failure: fdm dual pivot {e.pivot} vanishes'
        raise elements.UnisolvenceError(msg, e.pivot) from e
    return FdmDgBasis1D(n, weights, vinv.T)


class SparsityCounts(ty.NamedTuple):
    nnz_stiffness: int
    nnz_mass: int
    dim: int


def _nnz(a: ty.FloatArray) -> int:
    return int(np.count_nonzero(np.abs(a) > SPARSITY_THRESHOLD * np.max(np.abs(a))))


def tensor_sparsity_2d(p: int) -> SparsityCounts:
    """
    Nonzero counts of the stiffness and mass matrices of the tensor-product
    degree ``p`` basis on ``[-1, 1]**2``.
    """
    if p < 2:
        msg = f'tensor sparsity needs degree at least 2, got {p}'
        raise ValueError(msg)
    k1, m1 = gram_matrices_1d(fdm_basis_1d(p))
    k2 = np.kron(k1, m1) + np.kron(m1, k1)
    m2 = np.kron(m1, m1)
    counts = SparsityCounts(_nnz(k2), _nnz(m2), int(k2.shape[0]))
    logger.info(f'fdm degree {p}: {counts}')
    return counts
