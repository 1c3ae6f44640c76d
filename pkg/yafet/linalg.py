# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Dense linear algebra used by the rest of the package.

The kernels are thin layers over LAPACK (through ``scipy.linalg``) that add
the checks this package relies on: a pivot threshold for LU, symmetry and
definiteness checks, and error types that carry enough information to be
reported by the command line interface.
"""
from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from . import (
    ty,
)


PIVOT_TOLERANCE = 1e-14
SYMMETRY_TOLERANCE = 1e-12


class NumericalError(RuntimeError):
    pass


class SingularMatrixError(NumericalError):
    def __init__(self, msg: str, pivot: int):
        super().__init__(msg)
        self.pivot = pivot


class NotPositiveDefiniteError(NumericalError):
    pass


class EigensolverError(NumericalError):
    pass


class LUFactor(ty.NamedTuple):
    lu: ty.FloatArray
    piv: ty.IntArray

    @property
    def size(self) -> int:
        return int(self.lu.shape[0])


def _as_square(a: ty.ArrayLike, name: str = 'matrix') -> ty.FloatArray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        msg = f'{name} must be square and nonempty, got shape {arr.shape}'
        raise ValueError(msg)
    if not np.all(np.isfinite(arr)):
        msg = f'{name} has non-finite entries'
        raise ValueError(msg)
    return arr


def lu_factor(a: ty.ArrayLike) -> LUFactor:
    """
    LU factorization with partial pivoting.

    :raises SingularMatrixError: if a pivot falls below
      ``PIVOT_TOLERANCE * max|a|``. The error names the offending pivot.
    """
    arr = _as_square(a)
    scale = float(np.max(np.abs(arr)))
    with warnings.catch_warnings():
        # Exactly singular input is reported below with the pivot index.
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(arr, check_finite=False)
    threshold = PIVOT_TOLERANCE * scale
    small = np.flatnonzero(np.abs(np.diag(lu)) <= threshold)
    if scale == 0.0 or small.size:
        pivot = int(small[0]) if small.size else 0
        msg = f'singular matrix: pivot {pivot} below {threshold:.3e}'
        raise SingularMatrixError(msg, pivot)
    return LUFactor(lu, np.asarray(piv, dtype=np.int64))


def lu_solve(factor: LUFactor,
             b: ty.ArrayLike,
             transpose: bool = False,
             ) -> ty.FloatArray:
    """
    Solve ``a x = b`` (or ``a.T x = b`` if ``transpose``) from a factor
    returned by :func:`lu_factor`. ``b`` may hold several right-hand sides
    as columns.
    """
    rhs = np.asarray(b, dtype=np.float64)
    trans = 1 if transpose else 0
    x = scipy.linalg.lu_solve((factor.lu, factor.piv), rhs, trans=trans,
                              check_finite=False)
    return np.asarray(x, dtype=np.float64)


def invert(a: ty.ArrayLike) -> ty.FloatArray:
    factor = lu_factor(a)
    return lu_solve(factor, np.eye(factor.size))


def condition_2norm(a: ty.ArrayLike) -> float:
    """
    Ratio of extreme singular values. A zero smallest singular value gives
    ``inf``.

    >>> condition_2norm([[1.0, 0.0], [0.0, 10.0]])
    10.0
    """
    arr = _as_square(a)
    sigma = scipy.linalg.svdvals(arr, check_finite=False)
    if sigma[-1] == 0.0:
        return float('inf')
    return float(sigma[0] / sigma[-1])


def _check_symmetric(arr: ty.FloatArray) -> None:
    scale = max(float(np.max(np.abs(arr))), 1.0)
    asym = float(np.max(np.abs(arr - arr.T)))
    if asym > SYMMETRY_TOLERANCE * scale:
        msg = f'matrix is not symmetric (asymmetry {asym:.3e})'
        raise ValueError(msg)


def sym_eig(a: ty.ArrayLike) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
    symmetric matrix.
    """
    arr = _as_square(a)
    _check_symmetric(arr)
    try:
        w, q = scipy.linalg.eigh(arr, check_finite=False)
    except scipy.linalg.LinAlgError as e:
        msg = f'symmetric eigensolver failed: {e}'
        raise EigensolverError(msg) from e
    return w, q


def sym_tridiagonal_eig(diagonal: ty.ArrayLike,
                        offdiagonal: ty.ArrayLike,
                        ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    Eigen-decomposition of a symmetric tridiagonal matrix given by its
    diagonal and first off-diagonal (the Jacobi matrices of orthogonal
    polynomials).
    """
    d = np.asarray(diagonal, dtype=np.float64)
    e = np.asarray(offdiagonal, dtype=np.float64)
    if d.size == 1:
        return d.copy(), np.ones((1, 1))
    try:
        w, q = scipy.linalg.eigh_tridiagonal(d, e, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        msg = f'tridiagonal eigensolver failed: {exc}'
        raise EigensolverError(msg) from exc
    return w, q


def cholesky(a: ty.ArrayLike) -> ty.FloatArray:
    """
    Lower Cholesky factor of a symmetric positive definite matrix.
    """
    arr = _as_square(a)
    _check_symmetric(arr)
    try:
        low = scipy.linalg.cholesky(arr, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as e:
        msg = f'matrix is not positive definite: {e}'
        raise NotPositiveDefiniteError(msg) from e
    return np.asarray(low, dtype=np.float64)


def generalized_sym_eig(k: ty.ArrayLike,
                        m: ty.ArrayLike,
                        ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    Solve ``k c = lambda m c`` for symmetric ``k`` and SPD ``m`` by reducing
    with the Cholesky factor of ``m``. Eigenvectors are ``m``-orthonormal.
    """
    low = cholesky(m)
    karr = _as_square(k)
    _check_symmetric(karr)
    tmp = scipy.linalg.solve_triangular(low, karr, lower=True)
    reduced = scipy.linalg.solve_triangular(low, tmp.T, lower=True)
    reduced = 0.5 * (reduced + reduced.T)
    w, q = sym_eig(reduced)
    vecs = scipy.linalg.solve_triangular(low.T, q, lower=False)
    return w, np.asarray(vecs, dtype=np.float64)


def spanning_basis(rows: ty.ArrayLike,
                   tolerance: float = 1e-10,
                   ) -> ty.FloatArray:
    """
    Orthonormal rows spanning the row space of ``rows``. Singular values
    below ``tolerance`` relative to the largest are dropped.
    """
    arr = np.asarray(rows, dtype=np.float64)
    _, sigma, vt = scipy.linalg.svd(arr, full_matrices=False,
                                    check_finite=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros((0, arr.shape[1]))
    rank = int(np.count_nonzero(sigma > tolerance * sigma[0]))
    return np.asarray(vt[:rank], dtype=np.float64)
