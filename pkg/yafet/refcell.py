# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Reference simplices and their entities.

All cells are unit right simplices: the origin plus the unit coordinate
vectors. Entities of each dimension are the sorted vertex tuples in
lexicographic order, so the triangle's edges are ``(0, 1), (0, 2), (1, 2)``.
"""
from __future__ import annotations

import functools
import itertools
import math

import numpy as np

from . import (
    nodes,
    ty,
)


NodeVariant = ty.Literal['equispaced', 'spectral']
NODE_VARIANTS = ('equispaced', 'spectral')


class EntityRef(ty.NamedTuple):
    entity_dim: int
    entity_id: int


class ReferenceCell:
    def __init__(self, dim: int):
        if dim not in (1, 2, 3):
            msg = f'unsupported cell dimension: {dim}'
            raise ValueError(msg)
        self.__dim = dim
        vertices = np.zeros((dim + 1, dim))
        vertices[1:] = np.eye(dim)
        vertices.setflags(write=False)
        self.__vertices = vertices
        self.__topology = {
            e: list(itertools.combinations(range(dim + 1), e + 1))
            for e in range(dim + 1)
        }

    def __repr__(self) -> str:
        return f'ReferenceCell({self.__dim})'

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ReferenceCell) and other.dim == self.dim

    def __hash__(self) -> int:
        return hash(('ReferenceCell', self.__dim))

    def __reduce__(self) -> ty.Tuple[ty.Any, ...]:
        return (make_cell, (self.__dim,))

    @property
    def dim(self) -> int:
        return self.__dim

    @property
    def vertices(self) -> ty.FloatArray:
        return self.__vertices

    @property
    def topology(self) -> ty.Dict[int, ty.List[ty.Tuple[int, ...]]]:
        return {e: list(ents) for e, ents in self.__topology.items()}

    @property
    def measure(self) -> float:
        return 1.0 / math.factorial(self.__dim)

    @property
    def centroid(self) -> ty.FloatArray:
        return np.asarray(self.__vertices.mean(axis=0))

    def num_entities(self, entity_dim: int) -> int:
        return len(self.__topology[entity_dim])

    def entities(self, entity_dim: int) -> ty.List[EntityRef]:
        return [EntityRef(entity_dim, i)
                for i in range(self.num_entities(entity_dim))]

    def entity_vertex_ids(self, entity: EntityRef) -> ty.Tuple[int, ...]:
        self.__check_entity(entity)
        return self.__topology[entity.entity_dim][entity.entity_id]

    def entity_vertices(self, entity: EntityRef) -> ty.FloatArray:
        return np.asarray(self.__vertices[list(self.entity_vertex_ids(entity))])

    def entity_transform(self,
                         entity: EntityRef,
                         ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
        """
        Return ``(origin, jacobian)`` of the affine map from the
        ``entity_dim``-dimensional reference simplex onto the entity. The
        jacobian columns are the entity's vertices minus its first vertex.
        """
        verts = self.entity_vertices(entity)
        origin = verts[0]
        jacobian = (verts[1:] - origin).T
        return origin, np.asarray(jacobian.reshape(self.__dim, -1))

    def entity_measure(self, entity: EntityRef) -> float:
        e = entity.entity_dim
        if e == 0:
            return 1.0
        _, jac = self.entity_transform(entity)
        gram = jac.T @ jac
        return float(math.sqrt(np.linalg.det(gram)) / math.factorial(e))

    def entity_scale(self, entity: EntityRef) -> float:
        """
        Ratio of the entity's measure to the measure of its own reference
        simplex.
        """
        e = entity.entity_dim
        if e == 0:
            return 1.0
        return self.entity_measure(entity) * math.factorial(e)

    def facet_normal(self, facet_id: int) -> ty.FloatArray:
        d = self.__dim
        facet = EntityRef(d - 1, facet_id)
        verts = self.entity_vertices(facet)
        if d == 1:
            normal = np.array([1.0 if verts[0, 0] > 0.5 else -1.0])
        elif d == 2:
            t = verts[1] - verts[0]
            normal = np.array([t[1], -t[0]])
        else:
            normal = np.cross(verts[1] - verts[0], verts[2] - verts[0])
        normal = normal / np.linalg.norm(normal)
        if np.dot(normal, verts.mean(axis=0) - self.centroid) < 0.0:
            normal = -normal
        return np.asarray(normal)

    def facet_tangents(self, facet_id: int) -> ty.FloatArray:
        """
        Orthonormal tangents of a facet as rows: the Q factor of the facet's
        vertex differences, taken in vertex order, with positive R diagonal.
        """
        _, jac = self.entity_transform(EntityRef(self.__dim - 1, facet_id))
        return _orthonormal_columns(jac).T

    def edge_tangent(self, edge_id: int) -> ty.FloatArray:
        """
        Unit tangent of an edge, pointing from its lower to its higher
        numbered vertex.
        """
        verts = self.entity_vertices(EntityRef(1, edge_id))
        t = verts[1] - verts[0]
        return np.asarray(t / np.linalg.norm(t))

    def barycentric(self, points: ty.ArrayLike) -> ty.FloatArray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.hstack([1.0 - pts.sum(axis=1, keepdims=True), pts])

    def contains(self, points: ty.ArrayLike, tolerance: float = 1e-12) -> bool:
        return bool(np.all(self.barycentric(points) >= -tolerance))

    def make_points(self,
                    entity: EntityRef,
                    degree: int,
                    variant: str = 'equispaced',
                    ) -> ty.FloatArray:
        """
        Points of the degree-``degree`` lattice strictly interior to
        ``entity``, in cell coordinates, ordered by the lexicographic order
        of their barycentric multi-indices on the entity.

        :param variant: ``'equispaced'`` for the uniform barycentric lattice
          or ``'spectral'`` for the recursive Gauss-Lobatto family.
        """
        self.__check_entity(entity)
        if variant not in NODE_VARIANTS:
            msg = f'unknown point variant: {variant!r}'
            raise ValueError(msg)
        e = entity.entity_dim
        verts = self.entity_vertices(entity)
        if e == 0:
            return np.asarray(verts.copy())
        if degree == 0 and e == self.__dim:
            return np.asarray(self.centroid[None, :])
        if degree < 1:
            msg = f'degree must be at least 1, got {degree}'
            raise ValueError(msg)
        if variant == 'equispaced':
            family = nodes.equispaced_simplex(e, degree)
        else:
            family = nodes.recursive_simplex(e, degree)
        interior = np.all(family.multi_indices >= 1, axis=1)
        bary = family.points[interior]
        return np.asarray(bary @ verts).reshape(-1, self.__dim)

    def __check_entity(self, entity: EntityRef) -> None:
        e, i = entity
        if e not in self.__topology or not 0 <= i < len(self.__topology[e]):
            msg = f'invalid entity {tuple(entity)} for {self!r}'
            raise ValueError(msg)


def _orthonormal_columns(a: ty.FloatArray) -> ty.FloatArray:
    q, r = np.linalg.qr(a)
    # Positive diagonal in R, so column j keeps the orientation of a[:, j].
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    return q * signs


@functools.lru_cache(maxsize=None)
def make_cell(dim: int) -> ReferenceCell:
    return ReferenceCell(dim)


def make_points(cell: ReferenceCell,
                entity: EntityRef,
                degree: int,
                variant: str = 'equispaced',
                ) -> ty.FloatArray:
    return cell.make_points(entity, degree, variant)


def facet_normal(cell: ReferenceCell, facet_id: int) -> ty.FloatArray:
    return cell.facet_normal(facet_id)


def facet_tangents(cell: ReferenceCell, facet_id: int) -> ty.FloatArray:
    return cell.facet_tangents(facet_id)
