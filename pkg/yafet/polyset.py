# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Orthonormal polynomial expansion sets on the reference simplices.

The basis is the Dubiner family, evaluated by three-term recurrences written
directly in simplex coordinates. Level ``k`` of the recurrence uses the
linear forms ``s_k = 1 - sum(x[k+1:])`` and ``u_k = 2 x_k - s_k`` and the
homogenized Jacobi recurrence

    F[m+1] = (A u_k + B s_k) F[m] - C s_k**2 F[m-1]

so nothing is divided by a coordinate and vertices need no special care.
Basis functions are numbered by total degree first.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from . import (
    quadrature,
    refcell,
    ty,
    util,
)


def expansion_size(dim: int, n: int) -> int:
    """
    >>> expansion_size(2, 3)
    10
    """
    if n < 0:
        return 0
    return util.binomial(n + dim, dim)


def flat_index(multi: ty.Sequence[int]) -> int:
    """
    Position of the basis function with multi-index ``multi`` (``(p,)``,
    ``(p, q)`` or ``(p, q, r)``).
    """
    dim = len(multi)
    index = 0
    tail = 0
    for k in reversed(range(dim)):
        tail += multi[k]
        index += util.binomial(tail + dim - 1 - k, dim - k)
    return index


def derivative_multi_indices(dim: int, order: int) -> ty.List[ty.MultiIndex]:
    """
    All derivative multi-indices of total order at most ``order``.
    """
    out: ty.List[ty.MultiIndex] = []
    for total in range(order + 1):
        out.extend(reversed(list(util.lattice_iter(total, dim))))
    return out


def _jacobi_coefficients(alpha: float, m: int) -> ty.Tuple[float, float, float]:
    # P_{m+1} = (A t + B) P_m - C P_{m-1} for P^{(alpha, 0)}
    if m == 0:
        return 0.5 * (alpha + 2.0), 0.5 * alpha, 0.0
    s = 2.0 * m + alpha
    den = 2.0 * (m + 1) * (m + alpha + 1) * s
    a = (s + 1.0) * (s + 2.0) * s / den
    b = (s + 1.0) * alpha * alpha / den
    c = 2.0 * (m + alpha) * m * (s + 2.0) / den
    return a, b, c


class ExpansionSet:
    def __init__(self, cell: refcell.ReferenceCell, degree: int):
        if degree < 0:
            msg = f'expansion degree must be nonnegative, got {degree}'
            raise ValueError(msg)
        self.__cell = cell
        self.__degree = degree
        self.__multi = _multi_indices(cell.dim, degree)

    def __repr__(self) -> str:
        return f'ExpansionSet({self.__cell!r}, {self.__degree})'

    @property
    def cell(self) -> refcell.ReferenceCell:
        return self.__cell

    @property
    def degree(self) -> int:
        return self.__degree

    @property
    def size(self) -> int:
        return len(self.__multi)

    @property
    def multi_indices(self) -> ty.List[ty.MultiIndex]:
        return list(self.__multi)

    def index(self, multi: ty.Sequence[int]) -> int:
        if len(multi) != self.__cell.dim or sum(multi) > self.__degree:
            msg = f'multi-index {tuple(multi)} outside {self!r}'
            raise ValueError(msg)
        return flat_index(multi)

    def degree_block(self, k: int) -> slice:
        """
        Indices of the basis functions of total degree exactly ``k``.
        """
        dim = self.__cell.dim
        return slice(expansion_size(dim, k - 1), expansion_size(dim, k))

    def tabulate(self, points: ty.ArrayLike, order: int = 0) -> ty.Tabulation:
        """
        Values and partial derivatives up to ``order`` (at most 2).

        :return: mapping from derivative multi-index to an array of shape
          ``(size, npoints)``.
        """
        if order < 0 or order > 2:
            msg = (f'direct tabulation supports derivative order up to 2, '
                   f'got {order}; use differentiation matrices')
            raise ValueError(msg)
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        dim = self.__cell.dim
        if pts.shape[1] != dim:
            msg = f'expected points of dimension {dim}, got {pts.shape[1]}'
            raise ValueError(msg)
        phi, dphi, ddphi = _dubiner(dim, self.__degree, pts, order)
        table: ty.Tabulation = {}
        for alpha in derivative_multi_indices(dim, order):
            nz = [i for i, a in enumerate(alpha) for _ in range(a)]
            if not nz:
                table[alpha] = phi
            elif len(nz) == 1:
                assert dphi is not None
                table[alpha] = np.ascontiguousarray(dphi[:, nz[0], :])
            else:
                assert ddphi is not None
                table[alpha] = np.ascontiguousarray(ddphi[:, nz[0], nz[1], :])
        return table

    def differentiation_matrix(self, direction: int) -> ty.FloatArray:
        """
        Matrix ``D`` with ``D[i, j]`` the coefficient of basis function ``j``
        in the partial derivative of basis function ``i``. A function with
        coefficient row vector ``c`` has derivative coefficients ``c @ D``.
        ``D`` is strictly lower block triangular in total-degree blocks.
        """
        dim = self.__cell.dim
        if not 0 <= direction < dim:
            msg = f'invalid direction {direction} for dimension {dim}'
            raise ValueError(msg)
        return _differentiation_matrix(dim, self.__degree, direction).copy()

    def tabulate_derivative(self,
                            points: ty.ArrayLike,
                            alpha: ty.Sequence[int],
                            ) -> ty.FloatArray:
        """
        Partial derivative ``alpha`` of every basis function, of any order,
        through products of differentiation matrices.
        """
        dim = self.__cell.dim
        if len(alpha) != dim:
            msg = f'derivative multi-index {tuple(alpha)} has wrong length'
            raise ValueError(msg)
        values = self.tabulate(points)[(0,) * dim]
        op = np.eye(self.size)
        for direction, count in enumerate(alpha):
            for _ in range(count):
                op = op @ _differentiation_matrix(dim, self.__degree, direction)
        return np.asarray(op @ values)

    def project(self,
                f: ty.Callable[[ty.FloatArray], ty.ArrayLike],
                quad_degree: ty.Optional[int] = None,
                ) -> ty.FloatArray:
        """
        L2 projection coefficients of ``f`` (evaluated at an ``(n, dim)``
        array of points). Vector valued ``f`` returns ``(n, ncomp)`` and gives
        coefficients of shape ``(ncomp, size)``.
        """
        if quad_degree is None:
            quad_degree = 2 * self.__degree
        rule = quadrature.create_quadrature(self.__cell, quad_degree)
        phi = self.tabulate(rule.points)[(0,) * self.__cell.dim]
        values = np.asarray(f(rule.points), dtype=np.float64)
        weighted = phi * rule.weights
        if values.ndim == 1:
            return np.asarray(weighted @ values)
        return np.asarray((weighted @ values).T)


@functools.lru_cache(maxsize=None)
def _multi_indices(dim: int, degree: int) -> ty.Tuple[ty.MultiIndex, ...]:
    out: ty.List[ty.MultiIndex] = []
    for total in range(degree + 1):
        for tail in range(total + 1):
            if dim == 1:
                if tail == 0:
                    out.append((total,))
            elif dim == 2:
                out.append((total - tail, tail))
            else:
                for r in range(tail + 1):
                    out.append((total - tail, tail - r, r))
    return tuple(out)


def _outer(a: ty.FloatArray, b: ty.FloatArray) -> ty.FloatArray:
    # (dim, npts) x (dim, npts) -> (dim, dim, npts)
    return np.asarray(a[:, None, :] * b[None, :, :])


def _dubiner(dim: int,
             n: int,
             pts: ty.FloatArray,
             order: int,
             ) -> ty.Tuple[ty.FloatArray, ty.Optional[ty.FloatArray],
                           ty.Optional[ty.FloatArray]]:
    npts = pts.shape[0]
    size = expansion_size(dim, n)
    phi = np.zeros((size, npts))
    dphi = np.zeros((size, dim, npts)) if order >= 1 else None
    ddphi = np.zeros((size, dim, dim, npts)) if order >= 2 else None
    phi[0] = 1.0
    x = pts.T

    for k in range(dim):
        s = 1.0 - x[k + 1:].sum(axis=0)
        u = 2.0 * x[k] - s
        ds = np.zeros(dim)
        ds[k + 1:] = -1.0
        du = -ds
        du[k] = 2.0
        q = s * s
        dq = 2.0 * ds[:, None] * s[None, :]
        hq = 2.0 * np.outer(ds, ds)

        heads = [m for m in _multi_indices(dim, n) if not any(m[k:])]
        for head in heads:
            base = list(head)
            alpha = 2.0 * sum(head[:k]) + k
            for m in range(n - sum(head)):
                cur = flat_index(base[:k] + [m] + [0] * (dim - k - 1))
                nxt = flat_index(base[:k] + [m + 1] + [0] * (dim - k - 1))
                a, b, c = _jacobi_coefficients(alpha, m)
                lin = a * u + b * s
                dlin = a * du + b * ds
                phi[nxt] = lin * phi[cur]
                if dphi is not None:
                    dphi[nxt] = dlin[:, None] * phi[cur] + lin * dphi[cur]
                if ddphi is not None:
                    assert dphi is not None
                    dd = dlin[:, None, None] * dphi[cur][None, :, :]
                    ddphi[nxt] = (dd + dd.transpose(1, 0, 2)
                                  + lin * ddphi[cur])
                if m == 0:
                    continue
                prev = flat_index(base[:k] + [m - 1] + [0] * (dim - k - 1))
                phi[nxt] -= c * q * phi[prev]
                if dphi is not None:
                    dphi[nxt] -= c * (dq * phi[prev] + q * dphi[prev])
                if ddphi is not None:
                    assert dphi is not None
                    ddphi[nxt] -= c * (hq[:, :, None] * phi[prev]
                                       + _outer(dq, dphi[prev])
                                       + _outer(dphi[prev], dq)
                                       + q * ddphi[prev])

    scale = np.array([_norm_factor(m) for m in _multi_indices(dim, n)])
    phi *= scale[:, None]
    if dphi is not None:
        dphi *= scale[:, None, None]
    if ddphi is not None:
        ddphi *= scale[:, None, None, None]
    return phi, dphi, ddphi


def _norm_factor(multi: ty.Sequence[int]) -> float:
    prod = 1.0
    partial = 0
    for k, m in enumerate(multi):
        partial += m
        prod *= 2.0 * partial + k + 1.0
    return math.sqrt(prod)


@functools.lru_cache(maxsize=None)
def _differentiation_matrix(dim: int, n: int, direction: int) -> ty.FloatArray:
    eset = ExpansionSet(refcell.make_cell(dim), n)
    rule = quadrature.create_quadrature(eset.cell, 2 * n)
    table = eset.tabulate(rule.points, order=1)
    alpha = tuple(1 if i == direction else 0 for i in range(dim))
    values = table[(0,) * dim]
    deriv = table[alpha]
    d = (deriv * rule.weights) @ values.T
    # Entries outside the strictly lower block triangle vanish exactly.
    for i, mi in enumerate(_multi_indices(dim, n)):
        for j, mj in enumerate(_multi_indices(dim, n)):
            if sum(mj) >= sum(mi):
                d[i, j] = 0.0
    d.setflags(write=False)
    return d
