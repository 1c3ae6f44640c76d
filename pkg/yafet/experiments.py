# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
The numerical experiments driven by the command line.

Each experiment takes an :class:`ExperimentConfig` and returns its tables
keyed by label: the variant name for experiments that produce one table per
variant, the empty string otherwise.
"""
from __future__ import annotations

import contextlib
import csv
import math
import pathlib
import re
import time
import types

import numpy as np

from . import (
    elemcache,
    elements,
    fdm,
    fields,
    linalg,
    meshes,
    quadrature,
    refcell,
    ty,
    util,
)


DEFAULT_SEED = 20240601

Cell = ty.Union[str, int, float, None]


class Table(ty.NamedTuple):
    header: ty.List[str]
    rows: ty.List[ty.List[Cell]]
    comments: ty.Sequence[str] = ()


Tables = ty.Dict[str, Table]


class ExperimentConfig:
    """
    Parameters of an experiment run.

    All constructor parameters are set as attributes of this object and can
    be mutated before the configuration is entered. Entering the
    configuration makes its quadrature tables available to
    :func:`quadrature.create_quadrature`.
    """
    def __init__(self,
                 experiment: str = 'conditioning',
                 dim: int = 2,
                 degrees: ty.Optional[ty.Sequence[int]] = None,
                 variants: ty.Optional[ty.Sequence[str]] = None,
                 mesh: ty.Optional[ty.Sequence[int]] = None,
                 seed: int = DEFAULT_SEED,
                 out: ty.Union[str, pathlib.Path, None] = None,
                 quad_tables: ty.Union[str, pathlib.Path, None] = None,
                 deep: bool = False,
                 element: ty.Optional[str] = None,
                 cache_dir: ty.Union[str, pathlib.Path, None] = None,
                 ):
        """
        :param degrees: degrees to run. Each experiment has its own default.

        :param variants: element or node variants. Each experiment has its
          own default.

        :param mesh: boxes per axis. A single entry is repeated for every
          axis.

        :param seed: seed of the random solution vectors. Rows for degree
          ``k`` draw from a generator seeded with ``(seed, k)``.

        :param quad_tables: directory of tabulated quadrature rules.

        :param deep: add the expensive last refinement to convergence runs.

        :param element: element family for the experiments that take one.

        :param cache_dir: directory for an :class:`elemcache.ElementCache`.
          No cache is used if omitted.
        """
        self.experiment = experiment
        self.dim = dim
        self.degrees = degrees
        self.variants = variants
        self.mesh = mesh
        self.seed = seed
        self.out = out
        self.quad_tables = quad_tables
        self.deep = deep
        self.element = element
        self.cache_dir = cache_dir

        self.rule_table: ty.Optional[quadrature.RuleTable] = None
        self.__cache: ty.Optional[elemcache.ElementCache] = None
        self.__exit_stack: ty.Optional[contextlib.ExitStack] = None

    def __enter__(self) -> ExperimentConfig:
        with contextlib.ExitStack() as exit_stack:
            if self.quad_tables:
                self.rule_table = quadrature.RuleTable.from_directory(
                    self.quad_tables)
                exit_stack.enter_context(self.rule_table)
            if self.cache_dir:
                self.__cache = elemcache.ElementCache(self.cache_dir)
            self.__exit_stack = exit_stack.pop_all()
        return self

    def __exit__(self,
                 exc_type: ty.Optional[ty.Type[BaseException]],
                 exc_value: ty.Optional[BaseException],
                 traceback: ty.Optional[types.TracebackType],
                 ) -> ty.Optional[bool]:
        assert self.__exit_stack is not None
        self.__exit_stack.close()
        self.__exit_stack = None
        self.rule_table = None
        self.__cache = None
        return None

    def degree_list(self, default: ty.Sequence[int]) -> ty.List[int]:
        return list(self.degrees) if self.degrees else list(default)

    def variant_list(self, default: ty.Sequence[str]) -> ty.List[str]:
        return expand_variants(self.variants if self.variants else default)

    def mesh_shape(self, default: ty.Sequence[int], dim: int) -> ty.Tuple[int, ...]:
        shape = list(self.mesh) if self.mesh else list(default)
        if len(shape) == 1:
            shape = shape * dim
        if len(shape) != dim:
            msg = f'mesh {shape} does not match dimension {dim}'
            raise ValueError(msg)
        return tuple(shape)

    def rng(self, degree: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, degree])

    def create_element(self,
                       family: str,
                       dim: int,
                       degree: int,
                       variant: ty.Optional[str] = None,
                       ) -> elements.CiarletElement:
        if self.__cache is not None:
            return self.__cache(family, dim, degree, variant)
        return elements.create_element(family, dim, degree, variant)


_VARIANT_RANGE_RE = re.compile(r'^integral\((\d+)\.\.(\d+)\)$')


def expand_variants(variants: ty.Iterable[str]) -> ty.List[str]:
    """
    >>> expand_variants(['point', 'integral(0..2)'])
    ['point', 'integral(0)', 'integral(1)', 'integral(2)']
    """
    out: ty.List[str] = []
    for v in variants:
        m = _VARIANT_RANGE_RE.match(v)
        if m:
            out.extend(f'integral({q})'
                       for q in range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            out.append(v)
    return out


def write_csv(table: Table, stream: ty.TextIO) -> None:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_format_cell(c) for c in row])
    for comment in table.comments:
        stream.write(f'# {comment}\n')


def _format_cell(c: Cell) -> str:
    if c is None:
        return ''
    if isinstance(c, float):
        return util.format_float(c)
    return str(c)


def _order(prev: ty.Optional[float], cur: float) -> ty.Optional[float]:
    if prev is None or prev <= 0.0 or cur <= 0.0:
        return None
    return math.log2(prev / cur)


def conditioning(config: ExperimentConfig) -> Tables:
    """
    Condition number of the Lagrange Vandermonde matrix and the accuracy of
    solving with its transpose for a random solution vector.
    """
    cell = refcell.make_cell(config.dim)
    tables: Tables = {}
    for variant in config.variant_list(['equispaced', 'spectral']):
        rows: ty.List[ty.List[Cell]] = []
        for degree in config.degree_list(range(1, 11)):
            elem = config.create_element('lagrange', cell.dim, degree,
                                         variant)
            v = elem.vandermonde
            x = config.rng(degree).standard_normal(v.shape[0])
            b = v.T @ x
            x_hat = linalg.lu_solve(linalg.lu_factor(v), b, transpose=True)
            forward = np.linalg.norm(x - x_hat) / np.linalg.norm(x)
            backward = np.linalg.norm(v.T @ x_hat - b) / np.linalg.norm(b)
            rows.append([degree, elem.condition_number, float(forward),
                         float(backward)])
        tables[variant] = Table(['deg', 'kappa', 'forward', 'backward'], rows)
    return tables


def _biunit_mesh(config: ExperimentConfig) -> meshes.SimplicialMesh:
    return meshes.box_mesh(config.mesh_shape([1], config.dim), -1.0, 1.0)


def interpolation(config: ExperimentConfig) -> Tables:
    """
    Maximum error of Lagrange interpolation of the Runge function on the
    biunit simplex mesh, for equispaced and spectral nodes.
    """
    mesh = _biunit_mesh(config)
    field = fields.runge(config.dim)
    variants = ['equispaced', 'spectral']
    rows: ty.List[ty.List[Cell]] = []
    for degree in config.degree_list(range(1, 11)):
        row: ty.List[Cell] = [degree]
        for variant in variants:
            elem = config.create_element('lagrange', config.dim, degree,
                                         variant)
            coeffs = meshes.global_interpolate(mesh, elem, field)
            row.append(meshes.error_norms(mesh, elem, coeffs, field, 'Linf'))
        rows.append(row)
    return {'': Table(['deg'] + variants, rows)}


def _hdiv_family(config: ExperimentConfig) -> str:
    family = config.element or 'rt'
    if family not in ('rt', 'bdm'):
        msg = f'expected an H(div) family (rt or bdm), got {family!r}'
        raise ValueError(msg)
    return family


def divergence(config: ExperimentConfig) -> Tables:
    """
    L2 norm of the divergence of the interpolant of a divergence free field,
    per variant.
    """
    family = _hdiv_family(config)
    degree = config.degree_list([2])[0]
    mesh = meshes.box_mesh(config.mesh_shape([2], 3))
    rows: ty.List[ty.List[Cell]] = []
    for variant in config.variant_list(['point', 'integral(0..6)']):
        elem = config.create_element(family, 3, degree, variant)
        coeffs = meshes.global_interpolate(mesh, elem, fields.CURL3D)
        rows.append([variant, meshes.divergence_norm(mesh, elem, coeffs)])
    return {'': Table(['variant', 'divnorm'], rows)}


def convergence(config: ExperimentConfig) -> Tables:
    """
    Interpolation errors under uniform refinement of a box mesh, with the
    observed orders.
    """
    family = config.element or 'rt'
    if family not in ('rt', 'bdm', 'n1', 'n2'):
        msg = f'unsupported convergence element: {family!r}'
        raise ValueError(msg)
    degree = config.degree_list([2])[0]
    base = config.mesh_shape([2], 3)
    nrefs = 4 if config.deep else 3
    norm = 'Hdiv' if family in ('rt', 'bdm') else 'Hcurl'
    header = ['ref', 'l2', 'l2order', norm.lower(), f'{norm.lower()}order']
    tables: Tables = {}
    for variant in config.variant_list(['integral']):
        elem = config.create_element(family, 3, degree, variant)
        rows: ty.List[ty.List[Cell]] = []
        prev: ty.Tuple[ty.Optional[float], ty.Optional[float]] = (None, None)
        for ref in range(nrefs):
            mesh = meshes.box_mesh([n * 2 ** ref for n in base])
            coeffs = meshes.global_interpolate(mesh, elem, fields.SINEXP)
            l2 = meshes.error_norms(mesh, elem, coeffs, fields.SINEXP, 'L2')
            hnorm = meshes.error_norms(mesh, elem, coeffs, fields.SINEXP,
                                       norm)
            rows.append([ref, l2, _order(prev[0], l2),
                         hnorm, _order(prev[1], hnorm)])
            prev = (l2, hnorm)
        tables[variant] = Table(header, rows)
    return tables


def quadcount(config: ExperimentConfig) -> Tables:
    """
    Points in the Stroud rule and in the smallest tabulated rule for each
    degree.
    """
    cell = refcell.make_cell(config.dim)
    rows: ty.List[ty.List[Cell]] = []
    for degree in config.degree_list(range(1, 21)):
        stroud = quadrature.stroud_conical(cell, degree)
        tabulated: ty.Optional[int] = None
        if config.rule_table is not None:
            candidates = config.rule_table.candidates(config.dim, degree)
            if candidates:
                tabulated = min(r.npoints for r in candidates)
        rows.append([degree, stroud.npoints, tabulated])
    return {'': Table(['deg', 'stroud', 'tabulated'], rows)}


def fdm_study(config: ExperimentConfig) -> Tables:
    """
    Orthogonality residual of the fast-diagonalization basis and the
    sparsity of the tensor-product stiffness matrix.
    """
    rows: ty.List[ty.List[Cell]] = []
    for p in config.degree_list(range(2, 17)):
        residual = fdm.orthogonality_residual(fdm.fdm_basis_1d(p))
        if p >= 2:
            counts = fdm.tensor_sparsity_2d(p)
            rows.append([p, residual, counts.nnz_stiffness, counts.dim])
        else:
            rows.append([p, residual, None, None])
    header = ['p', 'eqn16_residual', 'nnz2d', 'dim2d']
    return {'': Table(header, rows)}


def read_points(stream: ty.TextIO, dim: int) -> ty.FloatArray:
    """
    Read one point per line, coordinates separated by commas or blanks.
    Blank lines and ``#`` comments are skipped.
    """
    points = []
    for lineno, line in enumerate(stream, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            coords = [float(t) for t in re.split(r'[,\s]+', line)]
        except ValueError:
            msg = f'line {lineno}: invalid point {line!r}'
            raise ValueError(msg) from None
        if len(coords) != dim:
            msg = f'line {lineno}: expected {dim} coordinates'
            raise ValueError(msg)
        points.append(coords)
    return np.array(points, dtype=np.float64).reshape(-1, dim)


def _single_variant(config: ExperimentConfig, family: str) -> str:
    # First of the expanded list, so ranges such as integral(0..2) work here.
    return config.variant_list([elements.default_variant(family)])[0]


def tabulate(config: ExperimentConfig,
             points: ty.Optional[ty.FloatArray] = None,
             ) -> Tables:
    """
    Nodal basis values at ``points``, one row per point. Without points the
    element's own DOF points are used.
    """
    family = config.element or 'lagrange'
    degree = config.degree_list([1])[0]
    variant = _single_variant(config, family)
    elem = config.create_element(family, config.dim, degree, variant)
    if points is None:
        points = elem.dual_points
    values = elem.tabulate(points)[(0,) * config.dim]
    ndofs, vs, npts = values.shape
    if vs == 1:
        header = [f'psi{i}' for i in range(ndofs)]
    else:
        header = [f'psi{i}_{c}' for i in range(ndofs) for c in range(vs)]
    rows: ty.List[ty.List[Cell]] = []
    for p in range(npts):
        rows.append([p] + [float(v) for v in values[:, :, p].reshape(-1)])
    return {'': Table(['point'] + header, rows)}


def timing(config: ExperimentConfig) -> Tables:
    """
    Wall-clock time to build an element and to tabulate it at 100 random
    points.
    """
    family = config.element or 'lagrange'
    variant = _single_variant(config, family)
    cell = refcell.make_cell(config.dim)
    rows: ty.List[ty.List[Cell]] = []
    for degree in config.degree_list(range(1, 11)):
        bary = config.rng(degree).dirichlet(np.ones(config.dim + 1), 100)
        points = bary[:, 1:]
        start = time.perf_counter()
        elem = elements.create_element(family, cell.dim, degree, variant)
        tinit = time.perf_counter() - start
        start = time.perf_counter()
        elem.tabulate(points, order=1)
        teval = time.perf_counter() - start
        rows.append([degree, tinit, teval])
    return {'': Table(['deg', 'tinit', 'teval'], rows)}


def inspect(config: ExperimentConfig) -> Tables:
    """
    DOF counts per entity and the Vandermonde condition number.
    """
    family = config.element or 'lagrange'
    degree = config.degree_list([1])[0]
    variant = _single_variant(config, family)
    elem = config.create_element(family, config.dim, degree, variant)
    rows: ty.List[ty.List[Cell]] = [
        [e, i, len(dofs)] for (e, i), dofs in sorted(elem.entity_dofs.items())
    ]
    comments = [f'{elem!r}',
                f'kappa={util.format_float(elem.condition_number)}']
    return {'': Table(['entity_dim', 'entity_id', 'ndofs'], rows, comments)}


EXPERIMENTS: ty.Dict[str, ty.Callable[[ExperimentConfig], Tables]] = {
    'conditioning': conditioning,
    'interpolation': interpolation,
    'divergence': divergence,
    'convergence': convergence,
    'quadcount': quadcount,
    'fdm': fdm_study,
    'tabulate': tabulate,
    'timing': timing,
    'inspect': inspect,
}


def run(config: ExperimentConfig) -> Tables:
    try:
        fn = EXPERIMENTS[config.experiment]
    except KeyError:
        msg = f'unknown experiment: {config.experiment!r}'
        raise ValueError(msg) from None
    with config:
        return fn(config)
