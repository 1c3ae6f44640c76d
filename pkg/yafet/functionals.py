# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Degrees of freedom as finite sums of weighted component evaluations.

Every functional, including integral moments, is stored as a list of terms
``(point, component, weight)``; applying it to a function ``u`` gives
``sum(weight * u[component](point))``.
"""
from __future__ import annotations

import numpy as np

from . import (
    quadrature,
    refcell,
    ty,
)


Kind = ty.Literal['point_eval', 'point_normal', 'point_tangential',
                  'integral_moment']

Selector = ty.Union[str, int]

POINT_TOLERANCE = 1e-12


class FunctionalError(ValueError):
    pass


class MissingEvaluationError(KeyError):
    pass


def _point_key(point: ty.FloatArray) -> ty.Tuple[float, ...]:
    return tuple(float(x) for x in point)


class EvaluationTable:
    """
    Values of a function at a set of points, looked up by exact point
    coordinates.

    :param points: array of shape ``(npoints, dim)``.
    :param values: array of shape ``(npoints,)`` or ``(npoints, ncomp)``.
    """
    def __init__(self, points: ty.ArrayLike, values: ty.ArrayLike):
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape[0] != pts.shape[0]:
            msg = 'points and values have different lengths'
            raise ValueError(msg)
        self.__values = {_point_key(p): v for p, v in zip(pts, vals)}

    @classmethod
    def from_callable(cls,
                      u: ty.Callable[[ty.FloatArray], ty.ArrayLike],
                      points: ty.ArrayLike,
                      ) -> EvaluationTable:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return cls(pts, u(pts))

    def lookup(self, point: ty.FloatArray, component: int) -> float:
        try:
            row = self.__values[_point_key(point)]
        except KeyError:
            msg = f'no evaluation at point {_point_key(point)}'
            raise MissingEvaluationError(msg) from None
        if component >= row.shape[0]:
            msg = f'no component {component} at point {_point_key(point)}'
            raise MissingEvaluationError(msg)
        return float(row[component])


class Functional:
    def __init__(self,
                 cell: refcell.ReferenceCell,
                 points: ty.ArrayLike,
                 components: ty.ArrayLike,
                 weights: ty.ArrayLike,
                 entity: refcell.EntityRef,
                 kind: str,
                 quad_degree: ty.Optional[int] = None,
                 ):
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        comps = np.asarray(components, dtype=np.int64).reshape(-1)
        wts = np.asarray(weights, dtype=np.float64).reshape(-1)
        if not (pts.shape[0] == comps.shape[0] == wts.shape[0]):
            msg = 'functional terms have inconsistent lengths'
            raise FunctionalError(msg)
        if pts.shape[1] != cell.dim:
            msg = f'functional points must have dimension {cell.dim}'
            raise FunctionalError(msg)
        if not cell.contains(pts, POINT_TOLERANCE):
            msg = f'functional point outside {cell!r}'
            raise FunctionalError(msg)
        for a in (pts, comps, wts):
            a.setflags(write=False)
        self.__cell = cell
        self.__points = pts
        self.__components = comps
        self.__weights = wts
        self.__entity = entity
        self.__kind = kind
        self.__quad_degree = quad_degree

    def __repr__(self) -> str:
        return (f'Functional({self.__kind}, entity={tuple(self.__entity)}, '
                f'terms={len(self.__weights)})')

    @property
    def cell(self) -> refcell.ReferenceCell:
        return self.__cell

    @property
    def points(self) -> ty.FloatArray:
        return self.__points

    @property
    def components(self) -> ty.IntArray:
        return self.__components

    @property
    def weights(self) -> ty.FloatArray:
        return self.__weights

    @property
    def entity(self) -> refcell.EntityRef:
        return self.__entity

    @property
    def kind(self) -> str:
        return self.__kind

    @property
    def quad_degree(self) -> ty.Optional[int]:
        return self.__quad_degree

    @property
    def max_component(self) -> int:
        return int(self.__components.max())

    def apply(self, table: EvaluationTable) -> float:
        total = 0.0
        for p, c, w in zip(self.__points, self.__components, self.__weights):
            total += w * table.lookup(p, int(c))
        return total

    def evaluate(self, u: ty.Callable[[ty.FloatArray], ty.ArrayLike]) -> float:
        """
        Apply to a function evaluated at an ``(n, dim)`` array of points.
        """
        return self.apply(EvaluationTable.from_callable(u, self.__points))


def point_evaluation(cell: refcell.ReferenceCell,
                     point: ty.ArrayLike,
                     entity: ty.Optional[refcell.EntityRef] = None,
                     component: int = 0,
                     ) -> Functional:
    if entity is None:
        entity = refcell.EntityRef(cell.dim, 0)
    pt = np.asarray(point, dtype=np.float64).reshape(1, cell.dim)
    return Functional(cell, pt, [component], [1.0], entity, 'point_eval')


def _check_on_entity(cell: refcell.ReferenceCell,
                     entity: refcell.EntityRef,
                     point: ty.FloatArray,
                     ) -> None:
    origin, jac = cell.entity_transform(entity)
    local, *_ = np.linalg.lstsq(jac, point - origin, rcond=None)
    dist = float(np.linalg.norm(origin + jac @ local - point))
    inside = bool(np.all(local >= -POINT_TOLERANCE)
                  and local.sum() <= 1.0 + POINT_TOLERANCE)
    if dist > POINT_TOLERANCE or not inside:
        msg = (f'point {tuple(point)} is not on entity '
               f'{tuple(entity)} (distance {dist:.3e})')
        raise FunctionalError(msg)


def point_direction(cell: refcell.ReferenceCell,
                    entity: refcell.EntityRef,
                    point: ty.ArrayLike,
                    direction: ty.ArrayLike,
                    kind: str,
                    ) -> Functional:
    """
    The functional ``u(point) . direction`` attached to ``entity``.
    """
    pt = np.asarray(point, dtype=np.float64).reshape(cell.dim)
    _check_on_entity(cell, entity, pt)
    vec = np.asarray(direction, dtype=np.float64).reshape(cell.dim)
    return Functional(cell, np.tile(pt, (cell.dim, 1)), np.arange(cell.dim),
                      vec, entity, kind)


def point_normal(cell: refcell.ReferenceCell,
                 facet_id: int,
                 point: ty.ArrayLike,
                 scale: float = 1.0,
                 ) -> Functional:
    """
    ``u(point) . n`` with ``n`` the unit outward normal of the facet, times
    ``scale``.
    """
    facet = refcell.EntityRef(cell.dim - 1, facet_id)
    return point_direction(cell, facet, point,
                           scale * cell.facet_normal(facet_id),
                           'point_normal')


def point_tangential(cell: refcell.ReferenceCell,
                     entity: ty.Union[int, refcell.EntityRef],
                     point: ty.ArrayLike,
                     tangent_index: int = 0,
                     scale: float = 1.0,
                     ) -> Functional:
    """
    ``u(point) . t`` times ``scale``. On edges ``t`` is the unit tangent
    from the lower to the higher numbered vertex; on faces it is one of the
    orthonormal facet tangents. An integer ``entity`` names a facet.
    """
    if isinstance(entity, int):
        entity = refcell.EntityRef(cell.dim - 1, entity)
    if entity.entity_dim == 1:
        t = cell.edge_tangent(entity.entity_id)
    elif entity.entity_dim == cell.dim - 1:
        t = cell.facet_tangents(entity.entity_id)[tangent_index]
    else:
        msg = f'no tangent for entity {tuple(entity)}'
        raise FunctionalError(msg)
    return point_direction(cell, entity, point, scale * t, 'point_tangential')


WeightFn = ty.Callable[[ty.FloatArray], ty.FloatArray]


def integral_moment(cell: refcell.ReferenceCell,
                    entity: refcell.EntityRef,
                    weight_fn: WeightFn,
                    selector: Selector = 'scalar',
                    weight_degree: int = 0,
                    base_degree: int = 0,
                    extra_degree: int = 0,
                    ) -> Functional:
    """
    Integral of (a component of) a function against a weight over an
    entity.

    The weight is evaluated at points in the entity's own reference
    coordinates. The rule is exact to ``weight_degree + base_degree +
    extra_degree``.

    :param selector: ``'scalar'`` integrates component 0; an integer ``i``
      integrates component ``i``; ``'normal'`` and ``'tangential'`` use the
      unit facet normal or edge tangent; ``'vector'`` takes vector weights of
      shape ``(npoints, dim)`` in cell coordinates; ``'facet_vector'`` takes
      vectors of shape ``(npoints, entity_dim)`` in the entity's reference
      frame, pushes them through the entity jacobian and integrates over the
      entity's reference simplex without measure scaling.
    """
    degree = weight_degree + base_degree + extra_degree
    if entity.entity_dim == cell.dim:
        local_rule = quadrature.create_quadrature(cell, degree)
        points = local_rule.points
        weights = local_rule.weights
        jac = np.eye(cell.dim)
    else:
        local_rule, points, weights = quadrature.entity_quadrature(
            cell, entity, degree,
            scale_by_measure=(selector != 'facet_vector'))
        _, jac = cell.entity_transform(entity)
    g = np.asarray(weight_fn(local_rule.points), dtype=np.float64)
    nq = len(weights)

    if selector == 'scalar' or isinstance(selector, int):
        comp = 0 if selector == 'scalar' else int(selector)
        return Functional(cell, points, np.full(nq, comp), weights * g,
                          entity, 'integral_moment', degree)

    if selector == 'normal':
        if entity.entity_dim != cell.dim - 1:
            msg = 'normal moments live on facets'
            raise FunctionalError(msg)
        vectors = np.outer(g, cell.facet_normal(entity.entity_id))
    elif selector == 'tangential':
        if entity.entity_dim != 1:
            msg = 'tangential moments with a scalar weight live on edges'
            raise FunctionalError(msg)
        vectors = np.outer(g, cell.edge_tangent(entity.entity_id))
    elif selector == 'vector':
        vectors = g.reshape(nq, cell.dim)
    elif selector == 'facet_vector':
        vectors = g.reshape(nq, -1) @ jac.T
    else:
        msg = f'unknown moment selector: {selector!r}'
        raise FunctionalError(msg)

    dim = cell.dim
    term_points = np.repeat(points, dim, axis=0)
    term_comps = np.tile(np.arange(dim), nq)
    term_weights = (weights[:, None] * vectors).reshape(-1)
    return Functional(cell, term_points, term_comps, term_weights, entity,
                      'integral_moment', degree)
