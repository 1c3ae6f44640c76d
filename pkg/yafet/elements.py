# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Finite elements as Ciarlet triples.

A :class:`CiarletElement` holds a polynomial space, written as coefficients
over an orthonormal :class:`~yafet.polyset.ExpansionSet`, and a list of
:class:`~yafet.functionals.Functional` degrees of freedom. The nodal basis is
obtained by inverting the generalized Vandermonde matrix
``V[i, j] = n_i(p_j)``.
"""
from __future__ import annotations

import functools
import logging
import re

import numpy as np

from . import (
    functionals,
    linalg,
    polyset,
    quadrature,
    refcell,
    ty,
    util,
)


logger = logging.getLogger()


Mapping = ty.Literal['affine', 'contravariant_piola', 'covariant_piola']

FAMILIES = ('lagrange', 'dg', 'rt', 'bdm', 'n1', 'n2')


class UnisolvenceError(linalg.SingularMatrixError):
    pass


class PolynomialSpace:
    """
    A polynomial space spanned by the rows of ``coeffs``, an array of shape
    ``(dim, value_size, expansion_size)`` over ``eset``.
    """
    def __init__(self, eset: polyset.ExpansionSet, coeffs: ty.ArrayLike):
        arr = np.asarray(coeffs, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != eset.size:
            msg = (f'space coefficients of shape {arr.shape} do not match '
                   f'expansion set of size {eset.size}')
            raise ValueError(msg)
        arr.setflags(write=False)
        self.__eset = eset
        self.__coeffs = arr

    @property
    def eset(self) -> polyset.ExpansionSet:
        return self.__eset

    @property
    def coeffs(self) -> ty.FloatArray:
        return self.__coeffs

    @property
    def dim(self) -> int:
        return int(self.__coeffs.shape[0])

    @property
    def value_size(self) -> int:
        return int(self.__coeffs.shape[1])

    def tabulate(self, points: ty.ArrayLike, order: int = 0) -> ty.Tabulation:
        table = _tabulate_expansion(self.__eset, points, order)
        return {alpha: np.einsum('rce,ep->rcp', self.__coeffs, values)
                for alpha, values in table.items()}

    def values(self, points: ty.ArrayLike) -> ty.FloatArray:
        """
        Values of every member, shape ``(dim, value_size, npoints)``.
        """
        return self.tabulate(points)[(0,) * self.__eset.cell.dim]


def _tabulate_expansion(eset: polyset.ExpansionSet,
                        points: ty.ArrayLike,
                        order: int,
                        ) -> ty.Tabulation:
    table = eset.tabulate(points, min(order, 2))
    if order > 2:
        for alpha in polyset.derivative_multi_indices(eset.cell.dim, order):
            if sum(alpha) > 2:
                table[alpha] = eset.tabulate_derivative(points, alpha)
    return table


def full_space(cell: refcell.ReferenceCell,
               degree: int,
               value_size: int = 1,
               embedded_degree: ty.Optional[int] = None,
               ) -> PolynomialSpace:
    """
    ``(P_degree)^value_size``, written over the expansion set of
    ``embedded_degree`` (``degree`` by default).
    """
    if embedded_degree is None:
        embedded_degree = degree
    eset = polyset.ExpansionSet(cell, embedded_degree)
    n = polyset.expansion_size(cell.dim, degree)
    coeffs = np.zeros((value_size * n, value_size, eset.size))
    for c in range(value_size):
        for j in range(n):
            coeffs[c * n + j, c, j] = 1.0
    return PolynomialSpace(eset, coeffs)


def _project_rows(eset: polyset.ExpansionSet,
                  fn: ty.Callable[[ty.FloatArray, ty.FloatArray], ty.FloatArray],
                  ) -> ty.FloatArray:
    # fn(points, phi) returns values of shape (rows, value_size, npoints),
    # projected here onto eset. The rule is exact for products of degree
    # 2 * eset.degree + 2.
    rule = quadrature.create_quadrature(eset.cell, 2 * eset.degree + 2)
    phi = eset.tabulate(rule.points)[(0,) * eset.cell.dim]
    values = fn(rule.points, phi)
    return np.asarray(np.einsum('rcq,eq->rce', values * rule.weights, phi))


def rt_space(cell: refcell.ReferenceCell, degree: int) -> PolynomialSpace:
    """
    ``(P_{k-1})^d + x P_{k-1}``. The ``x`` tail only needs the top degree
    block of ``P_{k-1}``.
    """
    k = degree
    dim = cell.dim
    base = full_space(cell, k - 1, dim, embedded_degree=k)
    top = base.eset.degree_block(k - 1)

    def tail(points: ty.FloatArray, phi: ty.FloatArray) -> ty.FloatArray:
        top_phi = phi[top]
        return np.asarray(top_phi[:, None, :] * points.T[None, :, :])

    rows = _project_rows(base.eset, tail)
    return PolynomialSpace(base.eset, np.concatenate([base.coeffs, rows]))


def ned1_space(cell: refcell.ReferenceCell, degree: int) -> PolynomialSpace:
    """
    ``(P_{k-1})^d + S_k`` with ``S_k`` the homogeneous degree ``k`` fields
    orthogonal to ``x``: the rotation ``(-y, x) p`` in 2D and ``x cross p``
    in 3D.
    """
    k = degree
    dim = cell.dim
    base = full_space(cell, k - 1, dim, embedded_degree=k)
    top = base.eset.degree_block(k - 1)

    def tail(points: ty.FloatArray, phi: ty.FloatArray) -> ty.FloatArray:
        top_phi = phi[top]
        x = points.T
        if dim == 2:
            rot = np.stack([-x[1], x[0]])
            return np.asarray(top_phi[:, None, :] * rot[None, :, :])
        rows = []
        for j in range(top_phi.shape[0]):
            for c in range(3):
                e = np.zeros((3, 1))
                e[c] = 1.0
                rows.append(np.cross(x, e, axis=0) * top_phi[j])
        return np.asarray(rows)

    rows = _project_rows(base.eset, tail)
    stacked = np.concatenate([base.coeffs, rows])
    n = stacked.shape[0]
    basis = linalg.spanning_basis(stacked.reshape(n, -1))
    return PolynomialSpace(base.eset,
                           basis.reshape(-1, dim, base.eset.size))


class CiarletElement:
    def __init__(self,
                 cell: refcell.ReferenceCell,
                 family: str,
                 variant: str,
                 degree: int,
                 space: PolynomialSpace,
                 dual: ty.Sequence[functionals.Functional],
                 mapping: str,
                 ):
        """
        :param degree: the element's nominal degree.
        :param space: the polynomial space.
        :param dual: the degrees of freedom, in DOF order.
        :param mapping: ``'affine'``, ``'contravariant_piola'`` or
          ``'covariant_piola'``.
        """
        self.__cell = cell
        self.__family = family
        self.__variant = variant
        self.__degree = degree
        self.__space = space
        self.__dual = tuple(dual)
        self.__mapping = mapping

        entity_dofs: ty.Dict[refcell.EntityRef, ty.List[int]] = {
            ent: [] for e in range(cell.dim + 1) for ent in cell.entities(e)
        }
        for i, f in enumerate(self.__dual):
            entity_dofs[f.entity].append(i)
        self.__entity_dofs = entity_dofs

        self.__dual_points, self.__dual_matrix = _dual_matrix(
            self.__dual, space.value_size)
        self.__vandermonde, vinv = build_nodal_basis(
            space, self.__dual, self.__dual_points, self.__dual_matrix)
        self.__vinv = vinv
        n = space.dim
        nodal = vinv.T @ space.coeffs.reshape(n, -1)
        self.__nodal = nodal.reshape(space.coeffs.shape)
        logger.info(f'built {self!r}')

    def __repr__(self) -> str:
        return (f'CiarletElement({self.__family}, dim={self.__cell.dim}, '
                f'degree={self.__degree}, variant={self.__variant})')

    @property
    def cell(self) -> refcell.ReferenceCell:
        return self.__cell

    @property
    def family(self) -> str:
        return self.__family

    @property
    def variant(self) -> str:
        return self.__variant

    @property
    def degree(self) -> int:
        return self.__degree

    @property
    def embedded_degree(self) -> int:
        return self.__space.eset.degree

    @property
    def space(self) -> PolynomialSpace:
        return self.__space

    @property
    def dual(self) -> ty.Tuple[functionals.Functional, ...]:
        return self.__dual

    @property
    def mapping(self) -> str:
        return self.__mapping

    @property
    def value_size(self) -> int:
        return self.__space.value_size

    @property
    def space_dim(self) -> int:
        return self.__space.dim

    @property
    def entity_dofs(self) -> ty.Dict[refcell.EntityRef, ty.List[int]]:
        return {k: list(v) for k, v in self.__entity_dofs.items()}

    def num_entity_dofs(self, entity_dim: int) -> int:
        """
        Number of DOFs on each entity of dimension ``entity_dim``.
        """
        return len(self.__entity_dofs[refcell.EntityRef(entity_dim, 0)])

    @property
    def vandermonde(self) -> ty.FloatArray:
        return self.__vandermonde

    @property
    def vandermonde_inverse(self) -> ty.FloatArray:
        return self.__vinv

    @property
    def nodal_coefficients(self) -> ty.FloatArray:
        return self.__nodal

    @property
    def dual_points(self) -> ty.FloatArray:
        """
        All distinct points used by the degrees of freedom.
        """
        return self.__dual_points

    @property
    def dual_matrix(self) -> ty.FloatArray:
        """
        Array ``M`` of shape ``(ndofs, value_size, npoints)`` such that
        ``n_i(u) = sum(M[i, c, p] * u_c(dual_points[p]))``.
        """
        return self.__dual_matrix

    @functools.cached_property
    def condition_number(self) -> float:
        kappa = linalg.condition_2norm(self.__vandermonde)
        logger.info(f'{self!r}: kappa_2(V) = {kappa:.6e}')
        return kappa

    def tabulate(self, points: ty.ArrayLike, order: int = 0) -> ty.Tabulation:
        """
        Nodal basis values and derivatives.

        :return: mapping from derivative multi-index to an array of shape
          ``(ndofs, value_size, npoints)``.
        """
        table = _tabulate_expansion(self.__space.eset, points, order)
        return {alpha: np.einsum('rce,ep->rcp', self.__nodal, values)
                for alpha, values in table.items()}

    def interpolate(self,
                    u: ty.Callable[[ty.FloatArray], ty.ArrayLike],
                    ) -> ty.FloatArray:
        """
        The DOF values ``n_i(u)``. ``u`` receives an ``(npoints, dim)`` array
        and returns ``(npoints,)`` or ``(npoints, value_size)`` values.
        """
        values = np.asarray(u(self.__dual_points), dtype=np.float64)
        return self.apply_dual(values)

    def apply_dual(self, values: ty.ArrayLike) -> ty.FloatArray:
        """
        DOF values from samples of a function at :attr:`dual_points`, given
        as ``(npoints,)`` or ``(npoints, value_size)``; a leading batch axis
        is allowed.
        """
        arr = np.asarray(values, dtype=np.float64)
        npts = self.__dual_points.shape[0]
        if arr.shape[-2:] != (npts, self.value_size):
            if arr.shape[-1] != npts or self.value_size != 1:
                msg = (f'expected values of shape (..., {npts}, '
                       f'{self.value_size}), got {arr.shape}')
                raise ValueError(msg)
            arr = arr[..., None]
        return np.asarray(np.einsum('icp,...pc->...i', self.__dual_matrix, arr))


def _dual_matrix(dual: ty.Sequence[functionals.Functional],
                 value_size: int,
                 ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    all_points = np.concatenate([f.points for f in dual])
    points, inverse = np.unique(all_points, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    matrix = np.zeros((len(dual), value_size, points.shape[0]))
    start = 0
    for i, f in enumerate(dual):
        stop = start + f.points.shape[0]
        if f.max_component >= value_size:
            msg = f'{f!r} uses a component beyond value size {value_size}'
            raise functionals.FunctionalError(msg)
        np.add.at(matrix[i], (f.components, inverse[start:stop]), f.weights)
        start = stop
    return points, matrix


def build_nodal_basis(space: PolynomialSpace,
                      dual: ty.Sequence[functionals.Functional],
                      points: ty.Optional[ty.FloatArray] = None,
                      matrix: ty.Optional[ty.FloatArray] = None,
                      ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    Assemble and invert the generalized Vandermonde matrix.

    :return: ``(V, V^-1)``.
    :raises UnisolvenceError: if ``V`` is singular.
    """
    if len(dual) != space.dim:
        msg = (f'dual set has {len(dual)} functionals for a space of '
               f'dimension {space.dim}')
        raise ValueError(msg)
    if points is None or matrix is None:
        points, matrix = _dual_matrix(dual, space.value_size)
    values = space.values(points)
    v = np.einsum('icp,jcp->ij', matrix, values)
    try:
        vinv = linalg.invert(v)
    except linalg.SingularMatrixError as e:
        msg = f'unisolvence failure: Vandermonde pivot {e.pivot} vanishes'
        raise UnisolvenceError(msg, e.pivot) from e
    return v, vinv


_VARIANT_RE = re.compile(r'^(point|integral)(?:\((\d+)\))?$')


def parse_variant(variant: str) -> ty.Tuple[str, int]:
    """
    >>> parse_variant('integral(3)')
    ('integral', 3)
    >>> parse_variant('point')
    ('point', 0)
    """
    m = _VARIANT_RE.match(variant.strip())
    if not m or (m.group(1) == 'point' and m.group(2) is not None):
        msg = f'unknown variant: {variant!r}'
        raise ValueError(msg)
    return m.group(1), int(m.group(2) or 0)


def _expansion_weight(eset: polyset.ExpansionSet,
                      index: int,
                      points: ty.FloatArray,
                      ) -> ty.FloatArray:
    return eset.tabulate(points)[(0,) * eset.cell.dim][index]


def _space_weight(space: PolynomialSpace,
                  index: int,
                  points: ty.FloatArray,
                  ) -> ty.FloatArray:
    return np.asarray(space.values(points)[index].T)


def _axis_weight(eset: polyset.ExpansionSet,
                 index: int,
                 axis: int,
                 points: ty.FloatArray,
                 ) -> ty.FloatArray:
    phi = _expansion_weight(eset, index, points)
    out = np.zeros((phi.shape[0], eset.cell.dim))
    out[:, axis] = phi
    return out


def _scalar_moments(cell: refcell.ReferenceCell,
                    entity: refcell.EntityRef,
                    degree: int,
                    selector: functionals.Selector,
                    base_degree: int,
                    q: int,
                    ) -> ty.List[functionals.Functional]:
    # Moments against the orthonormal basis of P_degree on the entity.
    eset = polyset.ExpansionSet(refcell.make_cell(entity.entity_dim), degree)
    return [functionals.integral_moment(
                cell, entity, functools.partial(_expansion_weight, eset, j),
                selector, degree, base_degree, q)
            for j in range(eset.size)]


def _component_moments(cell: refcell.ReferenceCell,
                       degree: int,
                       base_degree: int,
                       q: int,
                       ) -> ty.List[functionals.Functional]:
    # Interior moments against (P_degree)^dim.
    interior = refcell.EntityRef(cell.dim, 0)
    out: ty.List[functionals.Functional] = []
    for c in range(cell.dim):
        out.extend(_scalar_moments(cell, interior, degree, c, base_degree, q))
    return out


def _space_moments(cell: refcell.ReferenceCell,
                   entity: refcell.EntityRef,
                   space: PolynomialSpace,
                   selector: functionals.Selector,
                   base_degree: int,
                   q: int,
                   ) -> ty.List[functionals.Functional]:
    # Moments against the members of a vector space on the entity.
    return [functionals.integral_moment(
                cell, entity, functools.partial(_space_weight, space, r),
                selector, space.eset.degree, base_degree, q)
            for r in range(space.dim)]


def _entity_points(cell: refcell.ReferenceCell,
                   entity: refcell.EntityRef,
                   degree: int,
                   ) -> ty.FloatArray:
    """
    Points unisolvent for ``P_degree`` on an edge or face, away from its
    boundary: Gauss-Legendre points on edges, the interior of the
    equispaced lattice of degree ``degree + 3`` on faces.
    """
    if entity.entity_dim == 1:
        t, _ = quadrature.gauss_legendre_unit(degree + 1)
        origin, jac = cell.entity_transform(entity)
        return np.asarray(origin + np.outer(t, jac[:, 0]))
    return cell.make_points(entity, degree + 3, 'equispaced')


def _normal_dofs(cell: refcell.ReferenceCell,
                 degree: int,
                 base_degree: int,
                 variant: str,
                 ) -> ty.List[functionals.Functional]:
    kind, q = parse_variant(variant)
    out: ty.List[functionals.Functional] = []
    for facet in cell.entities(cell.dim - 1):
        if kind == 'integral':
            out.extend(_scalar_moments(cell, facet, degree, 'normal',
                                       base_degree, q))
            continue
        scale = cell.entity_measure(facet)
        for p in _entity_points(cell, facet, degree):
            out.append(functionals.point_normal(cell, facet.entity_id, p,
                                                scale=scale))
    return out


def _edge_tangential_dofs(cell: refcell.ReferenceCell,
                          degree: int,
                          base_degree: int,
                          variant: str,
                          ) -> ty.List[functionals.Functional]:
    kind, q = parse_variant(variant)
    out: ty.List[functionals.Functional] = []
    for edge in cell.entities(1):
        if kind == 'integral':
            out.extend(_scalar_moments(cell, edge, degree, 'tangential',
                                       base_degree, q))
            continue
        scale = cell.entity_measure(edge)
        for p in _entity_points(cell, edge, degree):
            out.append(functionals.point_tangential(cell, edge, p,
                                                    scale=scale))
    return out


def _check_vector_cell(cell: refcell.ReferenceCell, degree: int) -> None:
    if cell.dim not in (2, 3):
        msg = f'vector elements need a triangle or tetrahedron, got {cell!r}'
        raise ValueError(msg)
    if degree < 1:
        msg = f'vector element degree must be at least 1, got {degree}'
        raise ValueError(msg)


def lagrange(cell: refcell.ReferenceCell,
             degree: int,
             variant: str = 'equispaced',
             ) -> CiarletElement:
    if degree < 1:
        msg = f'Lagrange degree must be at least 1, got {degree}'
        raise ValueError(msg)
    dual = [functionals.point_evaluation(cell, p, entity)
            for e in range(cell.dim + 1)
            for entity in cell.entities(e)
            for p in cell.make_points(entity, degree, variant)]
    return CiarletElement(cell, 'lagrange', variant, degree,
                          full_space(cell, degree), dual, 'affine')


def discontinuous_lagrange(cell: refcell.ReferenceCell,
                           degree: int,
                           variant: str = 'equispaced',
                           ) -> CiarletElement:
    if degree < 0:
        msg = f'DG degree must be nonnegative, got {degree}'
        raise ValueError(msg)
    interior = refcell.EntityRef(cell.dim, 0)
    if degree == 0:
        points = cell.make_points(interior, 0, variant)
    else:
        points = np.concatenate([cell.make_points(entity, degree, variant)
                                 for e in range(cell.dim + 1)
                                 for entity in cell.entities(e)])
    dual = [functionals.point_evaluation(cell, p, interior) for p in points]
    return CiarletElement(cell, 'dg', variant, degree,
                          full_space(cell, degree), dual, 'affine')


def raviart_thomas(cell: refcell.ReferenceCell,
                   degree: int,
                   variant: str = 'integral',
                   ) -> CiarletElement:
    _check_vector_cell(cell, degree)
    k = degree
    _, q = parse_variant(variant)
    dual = _normal_dofs(cell, k - 1, k, variant)
    if k >= 2:
        dual.extend(_component_moments(cell, k - 2, k, q))
    return CiarletElement(cell, 'rt', variant, k, rt_space(cell, k), dual,
                          'contravariant_piola')


def brezzi_douglas_marini(cell: refcell.ReferenceCell,
                          degree: int,
                          variant: str = 'integral',
                          ) -> CiarletElement:
    _check_vector_cell(cell, degree)
    k = degree
    _, q = parse_variant(variant)
    dual = _normal_dofs(cell, k, k, variant)
    if k >= 2:
        interior = refcell.EntityRef(cell.dim, 0)
        dual.extend(_space_moments(cell, interior, ned1_space(cell, k - 1),
                                   'vector', k, q))
    return CiarletElement(cell, 'bdm', variant, k,
                          full_space(cell, k, cell.dim), dual,
                          'contravariant_piola')


def nedelec_first_kind(cell: refcell.ReferenceCell,
                       degree: int,
                       variant: str = 'integral',
                       ) -> CiarletElement:
    _check_vector_cell(cell, degree)
    k = degree
    kind, q = parse_variant(variant)
    dual = _edge_tangential_dofs(cell, k - 1, k, variant)
    if cell.dim == 3 and k >= 2:
        face_set = polyset.ExpansionSet(refcell.make_cell(2), k - 2)
        for face in cell.entities(2):
            if kind == 'point':
                _, jac = cell.entity_transform(face)
                for p in cell.make_points(face, k + 1, 'equispaced'):
                    for a in range(2):
                        dual.append(functionals.point_direction(
                            cell, face, p, jac[:, a], 'point_tangential'))
                continue
            for j in range(face_set.size):
                for a in range(2):
                    weight = functools.partial(_axis_weight, face_set, j, a)
                    dual.append(functionals.integral_moment(
                        cell, face, weight, 'facet_vector', k - 2, k, q))
    interior_degree = k - cell.dim
    if interior_degree >= 0:
        dual.extend(_component_moments(cell, interior_degree, k, q))
    return CiarletElement(cell, 'n1', variant, k, ned1_space(cell, k), dual,
                          'covariant_piola')


def nedelec_second_kind(cell: refcell.ReferenceCell,
                        degree: int,
                        variant: str = 'integral',
                        ) -> CiarletElement:
    _check_vector_cell(cell, degree)
    k = degree
    _, q = parse_variant(variant)
    dual = _edge_tangential_dofs(cell, k, k, variant)
    interior = refcell.EntityRef(cell.dim, 0)
    if cell.dim == 2 and k >= 2:
        dual.extend(_space_moments(cell, interior, rt_space(cell, k - 1),
                                   'vector', k, q))
    if cell.dim == 3:
        if k >= 2:
            face_rt = rt_space(refcell.make_cell(2), k - 1)
            for face in cell.entities(2):
                dual.extend(_space_moments(cell, face, face_rt,
                                           'facet_vector', k, q))
        if k >= 3:
            dual.extend(_space_moments(cell, interior, rt_space(cell, k - 2),
                                       'vector', k, q))
    return CiarletElement(cell, 'n2', variant, k,
                          full_space(cell, k, cell.dim), dual,
                          'covariant_piola')


_CONSTRUCTORS: ty.Dict[str, ty.Callable[..., CiarletElement]] = {
    'lagrange': lagrange,
    'dg': discontinuous_lagrange,
    'rt': raviart_thomas,
    'bdm': brezzi_douglas_marini,
    'n1': nedelec_first_kind,
    'n2': nedelec_second_kind,
}

_DEFAULT_VARIANTS = {
    'lagrange': 'equispaced',
    'dg': 'equispaced',
}


def default_variant(family: str) -> str:
    return _DEFAULT_VARIANTS.get(family, 'integral')


def create_element(family: str,
                   dim: int,
                   degree: int,
                   variant: ty.Optional[str] = None,
                   ) -> CiarletElement:
    """
    Build a catalog element by name: ``lagrange``, ``dg``, ``rt``, ``bdm``,
    ``n1`` or ``n2``.
    """
    try:
        constructor = _CONSTRUCTORS[family]
    except KeyError:
        msg = f'unknown element family: {family!r}'
        raise ValueError(msg) from None
    if variant is None:
        variant = default_variant(family)
    return constructor(refcell.make_cell(dim), degree, variant)


def tabulate(elem: CiarletElement,
             points: ty.ArrayLike,
             order: int = 0,
             ) -> ty.Tabulation:
    return elem.tabulate(points, order)


def interpolate(elem: CiarletElement,
                u: ty.Callable[[ty.FloatArray], ty.ArrayLike],
                ) -> ty.FloatArray:
    return elem.interpolate(u)


def expected_dimension(family: str, dim: int, degree: int) -> int:
    """
    Dimension of the catalog spaces, from the closed-form counts.
    """
    k = degree
    if family in ('lagrange', 'dg'):
        return util.binomial(k + dim, dim)
    if family in ('bdm', 'n2'):
        return dim * util.binomial(k + dim, dim)
    if family in ('rt', 'n1') and dim == 2:
        return k * (k + 2)
    if family == 'rt':
        return k * (k + 1) * (k + 3) // 2
    if family == 'n1':
        return k * (k + 2) * (k + 3) // 2
    msg = f'unknown element family: {family!r}'
    raise ValueError(msg)
