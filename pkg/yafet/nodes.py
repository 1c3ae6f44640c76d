# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Interpolation node families on simplices.

Families are stored in barycentric form. Rows follow the lexicographic order
of the barycentric multi-indices, so the equispaced and the spectral family of
the same degree list corresponding nodes in the same order.
"""
from __future__ import annotations

import functools

import numpy as np
import scipy.special

from . import (
    quadrature,
    ty,
    util,
)


class NodeFamily(ty.NamedTuple):
    variant: str
    dim: int
    degree: int
    points: ty.FloatArray
    multi_indices: ty.IntArray

    def cartesian(self) -> ty.FloatArray:
        """
        Cartesian coordinates on the unit right simplex.
        """
        return np.asarray(self.points[:, 1:])


def gauss_lobatto_1d(m: int) -> ty.FloatArray:
    """
    The ``m`` Gauss-Lobatto-Legendre points on ``[-1, 1]``, ascending.

    Interior points are the roots of the derivative of the Legendre
    polynomial of degree ``m - 1``. They are the Gauss-Jacobi(1, 1) points,
    polished by Newton steps on the derivative and symmetrized.
    """
    if m < 2:
        msg = f'Gauss-Lobatto rules need at least 2 points, got {m}'
        raise ValueError(msg)
    return _gauss_lobatto_1d(m).copy()


@functools.lru_cache(maxsize=None)
def _gauss_lobatto_1d(m: int) -> ty.FloatArray:
    x = np.empty(m)
    x[0], x[-1] = -1.0, 1.0
    if m > 2:
        interior, _ = quadrature.gauss_jacobi(1.0, 1.0, m - 2)
        x[1:-1] = _polish_lobatto_roots(interior, m - 1)
    x = 0.5 * (x - x[::-1])
    x.setflags(write=False)
    return x


def _polish_lobatto_roots(x: ty.FloatArray, n: int) -> ty.FloatArray:
    x = x.copy()
    for _ in range(3):
        p = scipy.special.eval_legendre(n, x)
        q = scipy.special.eval_legendre(n - 1, x)
        one_minus = 1.0 - x * x
        dp = n * (q - x * p) / one_minus
        ddp = (2.0 * x * dp - n * (n + 1) * p) / one_minus
        step = dp / ddp
        x -= step
        if np.max(np.abs(step)) < 1e-16:
            break
    return x


def _lattice(dim: int, n: int) -> ty.IntArray:
    return np.array(list(util.lattice_iter(n, dim + 1)), dtype=np.int64)


def equispaced_simplex(dim: int, n: int) -> NodeFamily:
    """
    The barycentric lattice ``{alpha / n : |alpha| = n}``.
    """
    if n < 1:
        msg = f'node degree must be at least 1, got {n}'
        raise ValueError(msg)
    alphas = _lattice(dim, n)
    return NodeFamily('equispaced', dim, n, alphas / float(n), alphas)


def recursive_simplex(dim: int, n: int) -> NodeFamily:
    """
    Recursively defined Gauss-Lobatto type nodes.

    Each barycentric multi-index is placed at the weighted average of the
    positions it takes on the facets obtained by dropping one coordinate,
    with weights from the one dimensional Lobatto family. In one dimension
    the construction reduces to the Gauss-Lobatto-Legendre points, and the
    restriction to any facet is the lower dimensional family.
    """
    if n < 1:
        msg = f'node degree must be at least 1, got {n}'
        raise ValueError(msg)
    if dim not in (1, 2, 3):
        msg = f'unsupported node dimension: {dim}'
        raise ValueError(msg)
    alphas = _lattice(dim, n)
    points = np.array([_recursive_point(tuple(int(a) for a in alpha))
                       for alpha in alphas])
    return NodeFamily('spectral', dim, n, points, alphas)


@functools.lru_cache(maxsize=None)
def _lobatto_unit(n: int) -> ty.FloatArray:
    # n + 1 points on [0, 1]
    return 0.5 * (_gauss_lobatto_1d(n + 1) + 1.0)


@functools.lru_cache(maxsize=None)
def _recursive_point(alpha: ty.Tuple[int, ...]) -> ty.FloatArray:
    d = len(alpha)
    n = sum(alpha)
    xn = _lobatto_unit(n)
    if d == 2:
        return np.array([xn[alpha[0]], xn[alpha[1]]])
    b = np.zeros(d)
    total = 0.0
    for i in range(d):
        n_noti = n - alpha[i]
        if n_noti == 0:
            continue
        w = xn[n_noti]
        sub = _recursive_point(alpha[:i] + alpha[i + 1:])
        b[:i] += w * sub[:i]
        b[i + 1:] += w * sub[i:]
        total += w
    return b / total


def make_family(variant: str, dim: int, n: int) -> NodeFamily:
    if variant == 'equispaced':
        return equispaced_simplex(dim, n)
    if variant == 'spectral':
        return recursive_simplex(dim, n)
    msg = f'unknown node variant: {variant!r}'
    raise ValueError(msg)
