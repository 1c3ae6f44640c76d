# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Structured simplicial meshes, global interpolation and error norms.

Cells always list their vertices in increasing global order, so every
sub-entity is parametrized the same way from each cell that contains it.
Edge tangents and face frames then agree across cells, and the only
orientation that needs fixing up is the normal of H(div) facet DOFs.
"""
from __future__ import annotations

import itertools
import logging
import math

import numpy as np

from . import (
    elements,
    fields,
    linalg,
    nodes,
    quadrature,
    refcell,
    ty,
)


logger = logging.getLogger()


DEFAULT_NORM_EXTRA_DEGREE = 2
DEFAULT_PROJECTION_EXTRA_DEGREE = 4

Norm = ty.Literal['L2', 'Hdiv', 'Hcurl', 'brokenH1', 'Linf']

# Six tetrahedra of a box around its main diagonal. Box vertices are
# numbered by the bit pattern x + 2y + 4z.
FREUDENTHAL_TETS = (
    (0, 1, 3, 7),
    (0, 2, 3, 7),
    (0, 1, 5, 7),
    (0, 2, 6, 7),
    (0, 4, 5, 7),
    (0, 4, 6, 7),
)


class DofMap(ty.NamedTuple):
    cell_dofs: ty.IntArray
    signs: ty.FloatArray
    owned: ty.BoolArray
    size: int


class SimplicialMesh:
    def __init__(self, vertices: ty.ArrayLike, cells: ty.ArrayLike):
        """
        :param vertices: array of shape ``(nvertices, dim)``.
        :param cells: array of shape ``(ncells, dim + 1)`` of vertex indices.
          Each row is sorted on construction.
        """
        verts = np.atleast_2d(np.asarray(vertices, dtype=np.float64))
        conn = np.sort(np.asarray(cells, dtype=np.int64), axis=1)
        dim = verts.shape[1]
        if conn.ndim != 2 or conn.shape[1] != dim + 1:
            msg = f'cells of a {dim}D mesh need {dim + 1} vertices'
            raise ValueError(msg)
        origin = verts[conn[:, 0]]
        jac = (verts[conn[:, 1:]] - origin[:, None, :]).transpose(0, 2, 1)
        det = np.linalg.det(jac)
        if np.any(np.abs(det) <= 1e-14 * np.max(np.abs(jac))):
            msg = 'mesh has degenerate cells'
            raise ValueError(msg)

        self.__dim = dim
        self.__vertices = verts
        self.__cells = conn
        self.__offsets = origin
        self.__jacobians = jac
        self.__dets = det
        self.__inverses = np.linalg.inv(jac)
        for a in (verts, conn, origin, jac, det, self.__inverses):
            a.setflags(write=False)

        ref = refcell.make_cell(dim)
        self.__entities: ty.Dict[int, ty.IntArray] = {}
        self.__cell_entities: ty.Dict[int, ty.IntArray] = {}
        for e in range(dim + 1):
            local = np.array(ref.topology[e], dtype=np.int64)
            glob = conn[:, local]
            flat = glob.reshape(-1, e + 1)
            unique, inverse = np.unique(flat, axis=0, return_inverse=True)
            self.__entities[e] = unique
            self.__cell_entities[e] = np.asarray(inverse).reshape(
                conn.shape[0], local.shape[0])

        facets = self.__cell_entities[dim - 1]
        ncells, nlocal = facets.shape
        owners = np.full(self.num_entities(dim - 1), ncells, dtype=np.int64)
        np.minimum.at(owners, facets.reshape(-1),
                      np.repeat(np.arange(ncells), nlocal))
        self.__facet_owners = owners

    def __repr__(self) -> str:
        return (f'SimplicialMesh(dim={self.__dim}, '
                f'cells={self.num_cells})')

    @property
    def dim(self) -> int:
        return self.__dim

    @property
    def vertices(self) -> ty.FloatArray:
        return self.__vertices

    @property
    def cells(self) -> ty.IntArray:
        return self.__cells

    @property
    def num_cells(self) -> int:
        return int(self.__cells.shape[0])

    @property
    def jacobians(self) -> ty.FloatArray:
        return self.__jacobians

    @property
    def offsets(self) -> ty.FloatArray:
        return self.__offsets

    @property
    def dets(self) -> ty.FloatArray:
        return self.__dets

    @property
    def inverse_jacobians(self) -> ty.FloatArray:
        return self.__inverses

    @property
    def reference_cell(self) -> refcell.ReferenceCell:
        return refcell.make_cell(self.__dim)

    def num_entities(self, entity_dim: int) -> int:
        return int(self.__entities[entity_dim].shape[0])

    def entity_vertices(self, entity_dim: int) -> ty.IntArray:
        """
        Global vertex ids of every entity of dimension ``entity_dim``.
        """
        return self.__entities[entity_dim]

    def cell_entities(self, entity_dim: int) -> ty.IntArray:
        """
        Global ids of the entities of each cell, in reference-cell order.
        """
        return self.__cell_entities[entity_dim]

    @property
    def facet_owners(self) -> ty.IntArray:
        """
        Lowest-numbered cell containing each facet.
        """
        return self.__facet_owners

    def facet_cells(self) -> ty.IntArray:
        """
        The cells on each side of every facet, shape ``(nfacets, 2)``; the
        second entry is ``-1`` on the boundary.
        """
        out = np.full((self.num_entities(self.__dim - 1), 2), -1,
                      dtype=np.int64)
        for c, row in enumerate(self.__cell_entities[self.__dim - 1]):
            for f in row:
                out[f, 0 if out[f, 0] < 0 else 1] = c
        return out

    def interior_facets(self) -> ty.IntArray:
        return np.flatnonzero(self.facet_cells()[:, 1] >= 0)

    def volume(self) -> float:
        return math.fsum(np.abs(self.__dets)) / math.factorial(self.__dim)

    def physical_points(self, points: ty.ArrayLike) -> ty.FloatArray:
        """
        Map reference points to every cell, shape ``(ncells, npoints, dim)``.
        """
        ref = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.asarray(self.__offsets[:, None, :]
                          + np.einsum('cij,pj->cpi', self.__jacobians, ref))

    def reference_points(self, cell: int, points: ty.ArrayLike) -> ty.FloatArray:
        x = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.asarray((x - self.__offsets[cell]) @ self.__inverses[cell].T)

    def dofmap(self, elem: elements.CiarletElement) -> DofMap:
        """
        Global numbering of the DOFs of a conforming element, grouped by
        entity dimension. Facet DOFs of H(div) elements carry the sign
        relating each cell's normal to the owning cell's.
        """
        self.__check_element(elem)
        dim = self.__dim
        entity_dofs = elem.entity_dofs
        counts = [elem.num_entity_dofs(e) for e in range(dim + 1)]
        starts = np.cumsum([0] + [counts[e] * self.num_entities(e)
                                  for e in range(dim + 1)])
        cell_dofs = np.zeros((self.num_cells, elem.space_dim), dtype=np.int64)
        for (e, i), dofs in entity_dofs.items():
            if not dofs:
                continue
            if len(dofs) != counts[e]:
                msg = f'{elem!r} has uneven DOF counts on {e}-entities'
                raise ValueError(msg)
            g = self.__cell_entities[e][:, i]
            cell_dofs[:, dofs] = (starts[e] + g[:, None] * counts[e]
                                  + np.arange(counts[e]))

        signs = np.ones(cell_dofs.shape)
        if elem.mapping == 'contravariant_piola':
            sdet = np.sign(self.__dets)
            cell_ids = np.arange(self.num_cells)
            for i in range(dim + 1):
                dofs = entity_dofs[refcell.EntityRef(dim - 1, i)]
                owner = self.__facet_owners[self.__cell_entities[dim - 1][:, i]]
                s = np.where(owner == cell_ids, 1.0, -sdet * sdet[owner])
                signs[:, dofs] = s[:, None]

        owned = np.zeros(cell_dofs.shape, dtype=bool)
        _, first = np.unique(cell_dofs.reshape(-1), return_index=True)
        owned.reshape(-1)[first] = True
        return DofMap(cell_dofs, signs, owned, int(starts[-1]))

    def __check_element(self, elem: elements.CiarletElement) -> None:
        if elem.cell.dim != self.__dim:
            msg = (f'element/mesh dimension mismatch: {elem.cell.dim} '
                   f'and {self.__dim}')
            raise ValueError(msg)


def interval_mesh(n: int, lo: float = 0.0, hi: float = 1.0) -> SimplicialMesh:
    if n < 1 or not lo < hi:
        msg = f'invalid interval mesh: n={n}, [{lo}, {hi}]'
        raise ValueError(msg)
    vertices = np.linspace(lo, hi, n + 1)[:, None]
    cells = np.stack([np.arange(n), np.arange(1, n + 1)], axis=1)
    return SimplicialMesh(vertices, cells)


def _grid(shape: ty.Sequence[int],
          lo: ty.Sequence[float],
          hi: ty.Sequence[float],
          ) -> ty.FloatArray:
    # Vertex i + (nx + 1) * (j + (ny + 1) * k) sits at grid position (i, j, k).
    axes = [np.linspace(a, b, n + 1) for n, a, b in zip(shape, lo, hi)]
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.stack([m.reshape(-1, order='F') for m in mesh], axis=1)


def _box_args(shape: ty.Sequence[int],
              lo: ty.Union[float, ty.Sequence[float]],
              hi: ty.Union[float, ty.Sequence[float]],
              ) -> ty.Tuple[ty.List[float], ty.List[float]]:
    d = len(shape)
    lo_l = [float(lo)] * d if isinstance(lo, (int, float)) else list(lo)
    hi_l = [float(hi)] * d if isinstance(hi, (int, float)) else list(hi)
    if any(n < 1 for n in shape) or any(not a < b for a, b in zip(lo_l, hi_l)):
        msg = f'invalid box mesh: shape={tuple(shape)}, lo={lo_l}, hi={hi_l}'
        raise ValueError(msg)
    return lo_l, hi_l


def unit_square_mesh(nx: int,
                     ny: int,
                     lo: ty.Union[float, ty.Sequence[float]] = 0.0,
                     hi: ty.Union[float, ty.Sequence[float]] = 1.0,
                     ) -> SimplicialMesh:
    """
    ``nx`` by ``ny`` rectangles, each cut into two right triangles along the
    diagonal from its lower left to its upper right corner.
    """
    lo_l, hi_l = _box_args((nx, ny), lo, hi)
    cells = []
    for j in range(ny):
        for i in range(nx):
            v00 = i + (nx + 1) * j
            v10, v01 = v00 + 1, v00 + nx + 1
            v11 = v01 + 1
            cells.append((v00, v10, v11))
            cells.append((v00, v01, v11))
    return SimplicialMesh(_grid((nx, ny), lo_l, hi_l), cells)


def unit_cube_mesh(nx: int,
                   ny: int,
                   nz: int,
                   lo: ty.Union[float, ty.Sequence[float]] = 0.0,
                   hi: ty.Union[float, ty.Sequence[float]] = 1.0,
                   ) -> SimplicialMesh:
    """
    ``nx * ny * nz`` boxes, each cut into the six tetrahedra of
    :data:`FREUDENTHAL_TETS`.
    """
    lo_l, hi_l = _box_args((nx, ny, nz), lo, hi)
    sx, sy = 1, nx + 1
    sz = (nx + 1) * (ny + 1)
    corner = [bx * sx + by * sy + bz * sz
              for bz, by, bx in itertools.product((0, 1), repeat=3)]
    cells = []
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                base = i * sx + j * sy + k * sz
                for tet in FREUDENTHAL_TETS:
                    cells.append(tuple(base + corner[v] for v in tet))
    return SimplicialMesh(_grid((nx, ny, nz), lo_l, hi_l), cells)


def box_mesh(shape: ty.Sequence[int],
             lo: ty.Union[float, ty.Sequence[float]] = 0.0,
             hi: ty.Union[float, ty.Sequence[float]] = 1.0,
             ) -> SimplicialMesh:
    if len(shape) == 1:
        lo_l, hi_l = _box_args(shape, lo, hi)
        return interval_mesh(shape[0], lo_l[0], hi_l[0])
    if len(shape) == 2:
        return unit_square_mesh(shape[0], shape[1], lo, hi)
    if len(shape) == 3:
        return unit_cube_mesh(shape[0], shape[1], shape[2], lo, hi)
    msg = f'unsupported mesh dimension: {len(shape)}'
    raise ValueError(msg)


def reference_mesh(dim: int) -> SimplicialMesh:
    """
    The reference cell as a one-cell mesh with the identity map.
    """
    cell = refcell.make_cell(dim)
    return SimplicialMesh(cell.vertices, [list(range(dim + 1))])


def pull_back(mesh: SimplicialMesh,
              mapping: str,
              values: ty.FloatArray,
              ) -> ty.FloatArray:
    """
    Map physical values ``(ncells, npoints, ncomp)`` to the reference cell.
    """
    if mapping == 'affine':
        return values
    if mapping == 'contravariant_piola':
        return np.asarray(mesh.dets[:, None, None]
                          * np.einsum('cij,cpj->cpi',
                                      mesh.inverse_jacobians, values))
    if mapping == 'covariant_piola':
        return np.asarray(np.einsum('cji,cpj->cpi', mesh.jacobians, values))
    msg = f'unknown mapping: {mapping!r}'
    raise ValueError(msg)


def _evaluate(f: ty.Callable[[ty.FloatArray], ty.ArrayLike],
              x: ty.FloatArray,
              ) -> ty.FloatArray:
    # (ncells, npoints, dim) -> (ncells, npoints, ncomp)
    nc, npts, dim = x.shape
    values = np.asarray(f(x.reshape(-1, dim)), dtype=np.float64)
    return values.reshape(nc, npts, -1)


def global_interpolate(mesh: SimplicialMesh,
                       elem: elements.CiarletElement,
                       u: ty.Callable[[ty.FloatArray], ty.ArrayLike],
                       ) -> ty.FloatArray:
    """
    Global DOF vector of the interpolant of ``u``. Each shared DOF is taken
    from the lowest-numbered cell that contains it.
    """
    dofmap = mesh.dofmap(elem)
    x = mesh.physical_points(elem.dual_points)
    ref = pull_back(mesh, elem.mapping, _evaluate(u, x))
    local = elem.apply_dual(ref) * dofmap.signs
    out = np.zeros(dofmap.size)
    out[dofmap.cell_dofs[dofmap.owned]] = local[dofmap.owned]
    return out


class DiscreteFunction:
    """
    A finite element function given by its global DOF vector, evaluated
    cell by cell at reference points.
    """
    def __init__(self,
                 mesh: SimplicialMesh,
                 elem: elements.CiarletElement,
                 coeffs: ty.ArrayLike,
                 ):
        dofmap = mesh.dofmap(elem)
        arr = np.asarray(coeffs, dtype=np.float64)
        if arr.shape != (dofmap.size,):
            msg = f'expected {dofmap.size} coefficients, got {arr.shape}'
            raise ValueError(msg)
        self.mesh = mesh
        self.elem = elem
        self.coeffs = arr
        self.__local = arr[dofmap.cell_dofs] * dofmap.signs

    @property
    def local_coefficients(self) -> ty.FloatArray:
        return self.__local

    def __reference(self,
                    points: ty.ArrayLike,
                    order: int,
                    cells: ty.Any,
                    ) -> ty.Tabulation:
        table = self.elem.tabulate(points, order)
        local = self.__local[cells]
        return {alpha: np.einsum('ci,ivp->cpv', local, t)
                for alpha, t in table.items()}

    def __reference_jacobian(self,
                             points: ty.ArrayLike,
                             cells: ty.Any,
                             ) -> ty.FloatArray:
        # (ncells, npoints, ncomp, dim): d u_hat_i / d x_hat_j
        dim = self.mesh.dim
        table = self.__reference(points, 1, cells)
        units = [tuple(int(i == j) for i in range(dim)) for j in range(dim)]
        return np.stack([table[a] for a in units], axis=-1)

    def values(self, points: ty.ArrayLike, cells: ty.Any = slice(None),
               ) -> ty.FloatArray:
        """
        Physical values at the images of reference ``points``, shape
        ``(ncells, npoints, value_size)``.
        """
        ref = self.__reference(points, 0, cells)[(0,) * self.mesh.dim]
        mapping = self.elem.mapping
        if mapping == 'affine':
            return ref
        if mapping == 'contravariant_piola':
            return np.asarray(np.einsum('cij,cpj->cpi',
                                        self.mesh.jacobians[cells], ref)
                              / self.mesh.dets[cells, None, None])
        return np.asarray(np.einsum('cji,cpj->cpi',
                                    self.mesh.inverse_jacobians[cells], ref))

    def divergence(self, points: ty.ArrayLike, cells: ty.Any = slice(None),
                   ) -> ty.FloatArray:
        if self.elem.mapping != 'contravariant_piola':
            msg = f'no divergence for {self.elem.mapping} elements'
            raise ValueError(msg)
        jac = self.__reference_jacobian(points, cells)
        div = np.trace(jac, axis1=2, axis2=3)
        return np.asarray(div / self.mesh.dets[cells, None])

    def curl(self, points: ty.ArrayLike, cells: ty.Any = slice(None),
             ) -> ty.FloatArray:
        """
        Physical curl: a vector ``(ncells, npoints, 3)`` in 3D, a scalar
        ``(ncells, npoints)`` in 2D.
        """
        if self.elem.mapping != 'covariant_piola':
            msg = f'no curl for {self.elem.mapping} elements'
            raise ValueError(msg)
        g = self.__reference_jacobian(points, cells)
        dets = self.mesh.dets[cells]
        if self.mesh.dim == 2:
            return np.asarray((g[..., 1, 0] - g[..., 0, 1]) / dets[:, None])
        ref = np.stack([g[..., 2, 1] - g[..., 1, 2],
                        g[..., 0, 2] - g[..., 2, 0],
                        g[..., 1, 0] - g[..., 0, 1]], axis=-1)
        return np.asarray(np.einsum('cij,cpj->cpi',
                                    self.mesh.jacobians[cells], ref)
                          / dets[:, None, None])

    def gradient(self, points: ty.ArrayLike, cells: ty.Any = slice(None),
                 ) -> ty.FloatArray:
        if self.elem.mapping != 'affine' or self.elem.value_size != 1:
            msg = 'gradients need a scalar affine element'
            raise ValueError(msg)
        g = self.__reference_jacobian(points, cells)[:, :, 0, :]
        return np.asarray(np.einsum('cji,cpj->cpi',
                                    self.mesh.inverse_jacobians[cells], g))

    def evaluate(self, cell: int, x: ty.ArrayLike) -> ty.FloatArray:
        """
        Values of the restriction to ``cell`` at physical points ``x``.
        """
        ref = self.mesh.reference_points(cell, x)
        return self.values(ref, cells=[cell])[0]


def _cell_sum(values: ty.FloatArray) -> float:
    # Sums within cells, then a correctly rounded sum across cells.
    return math.fsum(np.sum(values.reshape(values.shape[0], -1), axis=1))


def _norm_rule(mesh: SimplicialMesh,
               elem: elements.CiarletElement,
               extra_degree: int,
               ) -> ty.Tuple[quadrature.QuadratureRule, ty.FloatArray]:
    rule = quadrature.create_quadrature(
        mesh.reference_cell, 2 * elem.embedded_degree + 2 + extra_degree)
    weights = np.abs(mesh.dets)[:, None] * rule.weights[None, :]
    return rule, weights


def _squared(err: ty.FloatArray) -> ty.FloatArray:
    if err.ndim == 3:
        return np.asarray(np.sum(err * err, axis=2))
    return np.asarray(err * err)


def error_norms(mesh: SimplicialMesh,
                elem: elements.CiarletElement,
                coeffs: ty.ArrayLike,
                u_exact: fields.AnalyticField,
                which: str = 'L2',
                extra_degree: int = DEFAULT_NORM_EXTRA_DEGREE,
                ) -> float:
    """
    Norm of ``u_exact - u_h`` for the finite element function ``u_h`` with
    DOF vector ``coeffs``.

    :param which: ``'L2'``, ``'Hdiv'``, ``'Hcurl'``, ``'brokenH1'`` or
      ``'Linf'``. ``'Linf'`` is the maximum over a degree ``n + 6`` lattice
      in each cell.
    """
    fh = DiscreteFunction(mesh, elem, coeffs)
    n = elem.embedded_degree
    if which == 'Linf':
        lattice = nodes.equispaced_simplex(mesh.dim, n + 6).cartesian()
        x = mesh.physical_points(lattice)
        err = _evaluate(u_exact.value, x) - fh.values(lattice)
        return float(np.max(np.abs(err)))

    rule, weights = _norm_rule(mesh, elem, extra_degree)
    x = mesh.physical_points(rule.points)
    err = _evaluate(u_exact.value, x) - fh.values(rule.points)
    total = _cell_sum(weights * _squared(err))
    if which == 'L2':
        return math.sqrt(total)

    if which == 'Hdiv' and u_exact.div is not None:
        if elem.mapping == 'contravariant_piola':
            d = _evaluate(u_exact.div, x)[..., 0] - fh.divergence(rule.points)
            return math.sqrt(total + _cell_sum(weights * d * d))
    elif which == 'Hcurl' and u_exact.curl is not None:
        if elem.mapping == 'covariant_piola':
            curl_h = fh.curl(rule.points).reshape(x.shape[0], x.shape[1], -1)
            c = _evaluate(u_exact.curl, x) - curl_h
            return math.sqrt(total + _cell_sum(weights * _squared(c)))
    elif which == 'brokenH1' and u_exact.grad is not None:
        if elem.mapping == 'affine' and elem.value_size == 1:
            g = _evaluate(u_exact.grad, x) - fh.gradient(rule.points)
            return math.sqrt(total + _cell_sum(weights * _squared(g)))
    elif which not in ('Hdiv', 'Hcurl', 'brokenH1'):
        msg = f'unknown norm: {which!r}'
        raise ValueError(msg)
    msg = f'norm {which} is incompatible with {elem!r} and {u_exact.name}'
    raise ValueError(msg)


class CellwiseFunction(ty.NamedTuple):
    """
    A function known cell by cell: ``fn`` maps reference points to values
    of shape ``(ncells, npoints)`` or ``(ncells, npoints, ncomp)``.
    """
    fn: ty.Callable[[ty.FloatArray], ty.FloatArray]


def l2_project(mesh: SimplicialMesh,
               target: elements.CiarletElement,
               f: ty.Union[ty.Callable[[ty.FloatArray], ty.ArrayLike],
                           CellwiseFunction],
               extra_degree: int = DEFAULT_PROJECTION_EXTRA_DEGREE,
               ) -> ty.FloatArray:
    """
    Cellwise L2 projection onto a discontinuous scalar element. Vector
    valued ``f`` is projected componentwise.

    :return: coefficients of shape ``(ncells, ndofs)``, or
      ``(ncells, ndofs, ncomp)`` for vector valued ``f``.
    :raises linalg.SingularMatrixError: if the local mass matrix is
      singular.
    """
    interior = refcell.EntityRef(mesh.dim, 0)
    if (target.cell.dim != mesh.dim or target.value_size != 1
            or len(target.entity_dofs[interior]) != target.space_dim):
        msg = f'{target!r} is not a discontinuous scalar element'
        raise ValueError(msg)
    rule = quadrature.create_quadrature(mesh.reference_cell,
                                        2 * target.degree + extra_degree)
    psi = target.tabulate(rule.points)[(0,) * mesh.dim][:, 0, :]
    mass = (psi * rule.weights) @ psi.T
    factor = linalg.lu_factor(mass)

    if isinstance(f, CellwiseFunction):
        values = np.asarray(f.fn(rule.points), dtype=np.float64)
        vector = values.ndim == 3
        values = values.reshape(mesh.num_cells, rule.npoints, -1)
    else:
        values = _evaluate(f, mesh.physical_points(rule.points))
        vector = values.shape[2] > 1
    rhs = np.einsum('iq,q,cqk->ick', psi, rule.weights, values)
    ndofs, nc, ncomp = rhs.shape
    sol = linalg.lu_solve(factor, rhs.reshape(ndofs, -1))
    out = sol.reshape(ndofs, nc, ncomp).transpose(1, 0, 2)
    return np.asarray(out if vector else out[:, :, 0])


def cellwise_values(elem: elements.CiarletElement,
                    coeffs: ty.FloatArray,
                    points: ty.ArrayLike,
                    ) -> ty.FloatArray:
    """
    Values of cellwise coefficients (as returned by :func:`l2_project`) at
    reference points.
    """
    psi = elem.tabulate(points)[(0,) * elem.cell.dim][:, 0, :]
    if coeffs.ndim == 3:
        return np.asarray(np.einsum('cik,ip->cpk', coeffs, psi))
    return np.asarray(np.einsum('ci,ip->cp', coeffs, psi))


def commuting_defect(mesh: SimplicialMesh,
                     elem: elements.CiarletElement,
                     u: fields.AnalyticField,
                     extra_degree: int = DEFAULT_PROJECTION_EXTRA_DEGREE,
                     ) -> float:
    """
    L2 norm of the defect in the commuting diagram for ``elem``.

    H(div) elements compare ``div I(u)`` with the L2 projection of
    ``div u`` onto discontinuous polynomials of one degree less. Triangle
    H(curl) elements do the same with the scalar curl. Tetrahedron H(curl)
    elements compare ``curl I(u)`` with the interpolant of ``curl u`` into
    the next space of the sequence: Raviart-Thomas of the same degree after
    first kind Nedelec, BDM of one degree less after second kind Nedelec.
    Lowest-degree second kind Nedelec has piecewise constant curls and
    pairs with lowest-degree Raviart-Thomas.
    """
    k = elem.degree
    dim = mesh.dim
    fh = DiscreteFunction(mesh, elem, global_interpolate(mesh, elem, u))
    rule, weights = _norm_rule(mesh, elem, extra_degree)

    curl2d = dim == 2 and elem.mapping == 'covariant_piola'
    if elem.mapping == 'contravariant_piola' or curl2d:
        if elem.mapping == 'contravariant_piola':
            exact, approx = u.div, fh.divergence(rule.points)
        else:
            exact, approx = u.curl, fh.curl(rule.points)
        if exact is None:
            msg = f'field {u.name} lacks the derivative needed here'
            raise ValueError(msg)
        dg = elements.create_element('dg', dim, k - 1)
        proj = l2_project(mesh, dg, exact, extra_degree)
        defect = approx - cellwise_values(dg, proj, rule.points)
        return math.sqrt(_cell_sum(weights * defect * defect))

    if elem.mapping != 'covariant_piola' or u.curl is None:
        msg = f'no commuting diagram for {elem!r} and {u.name}'
        raise ValueError(msg)
    variant = elem.variant if elem.variant.startswith('integral') \
        else 'integral'
    if elem.family == 'n1' or k == 1:
        partner = elements.create_element('rt', dim, k, variant)
    else:
        partner = elements.create_element('bdm', dim, k - 1, variant)
    gh = DiscreteFunction(mesh, partner,
                          global_interpolate(mesh, partner, u.curl))
    defect = fh.curl(rule.points) - gh.values(rule.points)
    return math.sqrt(_cell_sum(weights * _squared(defect)))


def divergence_norm(mesh: SimplicialMesh,
                    elem: elements.CiarletElement,
                    coeffs: ty.ArrayLike,
                    extra_degree: int = DEFAULT_NORM_EXTRA_DEGREE,
                    ) -> float:
    """
    ``||div u_h||`` in L2, by direct quadrature.
    """
    fh = DiscreteFunction(mesh, elem, coeffs)
    rule, weights = _norm_rule(mesh, elem, extra_degree)
    div = fh.divergence(rule.points)
    return math.sqrt(_cell_sum(weights * div * div))
