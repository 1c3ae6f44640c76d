# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Quadrature rules on the reference simplices.

Rules come from three places: Stroud conical products of Gauss-Jacobi rules,
a couple of hand-coded triangle rules, and externally tabulated rules loaded
from text files. Loaded rules are made available through :class:`RuleTable`
objects, which act as context managers: entering a table makes
:func:`create_quadrature` consider its rules until the table is exited.
"""
from __future__ import annotations

import functools
import hashlib
import itertools
import logging
import math
import pathlib
import types

import numpy as np
import scipy.special

from . import (
    linalg,
    refcell,
    ty,
    util,
)


logger = logging.getLogger()


Provenance = ty.Literal['gauss', 'stroud', 'tabulated', 'handcoded']

RELATIVE_TOLERANCE = 1e-12
ABSOLUTE_TOLERANCE = 1e-13


class QuadratureTableError(ValueError):
    pass


class ExactnessError(QuadratureTableError):
    def __init__(self, msg: str, monomial: str):
        super().__init__(msg)
        self.monomial = monomial


class QuadratureRule(ty.NamedTuple):
    cell: refcell.ReferenceCell
    points: ty.FloatArray
    weights: ty.FloatArray
    degree: int
    provenance: str

    @property
    def npoints(self) -> int:
        return int(self.weights.shape[0])

    def integrate(self, values: ty.ArrayLike) -> ty.Any:
        """
        Integrate sampled values. The last axis of ``values`` runs over the
        rule's points.
        """
        return np.asarray(values) @ self.weights


def gauss_jacobi(alpha: float,
                 beta: float,
                 m: int,
                 ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    ``m``-point Gauss-Jacobi rule on ``[-1, 1]`` for the weight
    ``(1 - x)**alpha * (1 + x)**beta``, from the eigen-decomposition of the
    Jacobi matrix.

    :return: ascending points and the corresponding weights.
    """
    if m < 1:
        msg = f'Gauss-Jacobi rules need at least one point, got {m}'
        raise ValueError(msg)
    a, b = float(alpha), float(beta)
    k = np.arange(m, dtype=np.float64)
    s = 2.0 * k + a + b
    diag = np.empty(m)
    diag[0] = (b - a) / (a + b + 2.0)
    diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2.0))
    kk = k[1:]
    ss = s[1:]
    off = np.sqrt(4.0 * kk * (kk + a) * (kk + b) * (kk + a + b)
                  / (ss * ss * (ss + 1.0) * (ss - 1.0)))
    x, vecs = linalg.sym_tridiagonal_eig(diag, off)
    mu0 = 2.0 ** (a + b + 1.0) * math.exp(
        scipy.special.gammaln(a + 1.0) + scipy.special.gammaln(b + 1.0)
        - scipy.special.gammaln(a + b + 2.0))
    w = mu0 * vecs[0, :] ** 2
    order = np.argsort(x)
    return np.asarray(x[order]), np.asarray(w[order])


def gauss_legendre_unit(m: int) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    """
    ``m``-point Gauss-Legendre rule mapped to ``[0, 1]``.
    """
    x, w = gauss_jacobi(0.0, 0.0, m)
    return 0.5 * (x + 1.0), 0.5 * w


def stroud_conical(cell: refcell.ReferenceCell, degree: int) -> QuadratureRule:
    """
    Collapsed tensor product of Gauss-Jacobi rules. The ``k``-th collapsed
    direction uses the weight ``(1 - x)**k`` to absorb the Jacobian of the
    Duffy map, so ``floor(degree / 2) + 1`` points per direction suffice.
    """
    if degree < 0:
        msg = f'quadrature degree must be nonnegative, got {degree}'
        raise ValueError(msg)
    m = degree // 2 + 1
    points, weights = _stroud_points_weights(cell.dim, m)
    return QuadratureRule(cell, points.copy(), weights.copy(), 2 * m - 1,
                          'stroud')


@functools.lru_cache(maxsize=None)
def _stroud_points_weights(dim: int,
                           m: int,
                           ) -> ty.Tuple[ty.FloatArray, ty.FloatArray]:
    factors = [gauss_jacobi(float(k), 0.0, m) for k in range(dim)]
    points = []
    weights = []
    for combo in itertools.product(range(m), repeat=dim):
        xi = [factors[k][0][combo[k]] for k in range(dim)]
        w = 1.0
        for k in range(dim):
            w *= factors[k][1][combo[k]]
        points.append(_collapse(xi))
        weights.append(w / 2.0 ** (dim * (dim + 1) // 2))
    return np.array(points), np.array(weights)


def _collapse(xi: ty.Sequence[float]) -> ty.List[float]:
    # Duffy map from [-1, 1]^d onto the unit simplex. Coordinate k depends on
    # xi[k] and on the collapsed directions xi[k+1:].
    dim = len(xi)
    out = [0.0] * dim
    remaining = 1.0
    for k in reversed(range(dim)):
        t = 0.5 * (1.0 + xi[k])
        out[k] = remaining * t
        remaining *= 1.0 - t
    return out


def _handcoded_rules() -> ty.List[QuadratureRule]:
    tri = refcell.make_cell(2)
    centroid = QuadratureRule(
        tri, np.array([[1.0 / 3.0, 1.0 / 3.0]]), np.array([0.5]), 1,
        'handcoded')
    midpoints = QuadratureRule(
        tri, np.array([[0.5, 0.0], [0.0, 0.5], [0.5, 0.5]]),
        np.full(3, 1.0 / 6.0), 2, 'handcoded')
    return [centroid, midpoints]


def monomial_integral(exponents: ty.Sequence[int]) -> float:
    """
    Exact integral of ``prod(x_i ** a_i)`` over the unit right simplex of
    dimension ``len(exponents)``.
    """
    num = 1.0
    for a in exponents:
        num *= math.factorial(a)
    return num / math.factorial(sum(exponents) + len(exponents))


def monomial_name(exponents: ty.Sequence[int]) -> str:
    """
    >>> monomial_name((0, 0))
    '1'
    >>> monomial_name((2, 1, 0))
    'x^2*y'
    """
    names = 'xyz'
    factors = []
    for name, a in zip(names, exponents):
        if a == 1:
            factors.append(name)
        elif a > 1:
            factors.append(f'{name}^{a}')
    return '*'.join(factors) if factors else '1'


def first_inexact_monomial(rule: QuadratureRule,
                           degree: ty.Optional[int] = None,
                           ) -> ty.Optional[ty.Tuple[int, ...]]:
    """
    Return the first monomial (by total degree, then lexicographically
    descending exponents) that ``rule`` fails to integrate to tolerance, or
    ``None``.
    """
    if degree is None:
        degree = rule.degree
    dim = rule.cell.dim
    pts = rule.points
    for total in range(degree + 1):
        for exps in reversed(list(util.lattice_iter(total, dim))):
            values = np.prod(pts ** np.array(exps), axis=1)
            approx = float(rule.integrate(values))
            exact = monomial_integral(exps)
            err = abs(approx - exact)
            if exact < 1e-6:
                ok = err <= ABSOLUTE_TOLERANCE
            else:
                ok = err <= RELATIVE_TOLERANCE * exact
            if not ok:
                return exps
    return None


def verify_exactness(rule: QuadratureRule) -> None:
    failed = first_inexact_monomial(rule)
    if failed is not None:
        name = monomial_name(failed)
        msg = (f'rule with {rule.npoints} points on simplex {rule.cell.dim} '
               f'is not exact to degree {rule.degree}: monomial {name} fails')
        raise ExactnessError(msg, name)


def load_tabulated(stream: ty.TextIO,
                   source: str = '<stream>',
                   ) -> ty.List[QuadratureRule]:
    """
    Read rules from a table file. Each rule starts with a header line
    ``simplex <dim> degree <q> npoints <k>`` followed by ``k`` lines holding
    the point coordinates and the weight. Text after ``#`` is ignored.

    :raises QuadratureTableError: on malformed input.
    :raises ExactnessError: if a rule fails to integrate a monomial of its
      declared degree.
    """
    lines = []
    for lineno, raw in enumerate(stream, start=1):
        text = raw.split('#', 1)[0].strip()
        if text:
            lines.append((lineno, text))

    rules: ty.List[QuadratureRule] = []
    pos = 0
    while pos < len(lines):
        lineno, header = lines[pos]
        fields = header.split()
        if (len(fields) != 6 or fields[0] != 'simplex'
                or fields[2] != 'degree' or fields[4] != 'npoints'):
            msg = f'{source}:{lineno}: expected rule header, got {header!r}'
            raise QuadratureTableError(msg)
        try:
            dim, degree, npoints = int(fields[1]), int(fields[3]), int(fields[5])
        except ValueError as e:
            msg = f'{source}:{lineno}: invalid rule header {header!r}'
            raise QuadratureTableError(msg) from e
        if dim not in (1, 2, 3) or degree < 0 or npoints < 1:
            msg = f'{source}:{lineno}: invalid rule header {header!r}'
            raise QuadratureTableError(msg)
        body = lines[pos + 1:pos + 1 + npoints]
        if len(body) != npoints:
            msg = f'{source}:{lineno}: expected {npoints} rows, found {len(body)}'
            raise QuadratureTableError(msg)
        data = np.empty((npoints, dim + 1))
        for row, (rowno, text) in enumerate(body):
            values = text.split()
            if len(values) != dim + 1:
                msg = f'{source}:{rowno}: expected {dim + 1} numbers'
                raise QuadratureTableError(msg)
            try:
                data[row] = [float(v) for v in values]
            except ValueError as e:
                msg = f'{source}:{rowno}: invalid number in {text!r}'
                raise QuadratureTableError(msg) from e
        rule = QuadratureRule(refcell.make_cell(dim),
                              np.ascontiguousarray(data[:, :dim]),
                              np.ascontiguousarray(data[:, dim]),
                              degree, 'tabulated')
        verify_exactness(rule)
        rules.append(rule)
        pos += 1 + npoints
    return rules


class RuleTable:
    """
    A read-only collection of tabulated rules.

    Use it as a context manager to make :func:`create_quadrature` consider
    its rules.
    """
    def __init__(self, rules: ty.Iterable[QuadratureRule] = ()):
        self.__rules = tuple(rules)

    @classmethod
    def from_directory(cls, path: ty.Union[str, pathlib.Path]) -> RuleTable:
        """
        Load every regular file in ``path``, in sorted name order.
        """
        path = pathlib.Path(path)
        if not path.is_dir():
            msg = f'quadrature table directory not found: {path}'
            raise QuadratureTableError(msg)
        rules: ty.List[QuadratureRule] = []
        for f in sorted(p for p in path.iterdir() if p.is_file()):
            with open(f, encoding='utf-8') as stream:
                loaded = load_tabulated(stream, source=str(f))
            if not loaded:
                logger.warning(f'quadrature table file has no rules: {f}')
            rules.extend(loaded)
        return cls(rules)

    @property
    def rules(self) -> ty.Tuple[QuadratureRule, ...]:
        return self.__rules

    @property
    def digest(self) -> str:
        """
        sha256 over the dimension, degree, points and weights of every rule.
        """
        h = hashlib.sha256()
        for r in self.__rules:
            h.update(f'{r.cell.dim} {r.degree} {r.npoints};'.encode())
            h.update(np.ascontiguousarray(r.points, dtype=float).tobytes())
            h.update(np.ascontiguousarray(r.weights, dtype=float).tobytes())
        return h.hexdigest()

    def candidates(self, dim: int, degree: int) -> ty.List[QuadratureRule]:
        return [r for r in self.__rules
                if r.cell.dim == dim and r.degree >= degree]

    def __enter__(self) -> RuleTable:
        _tables_stack.append(self)
        return self

    def __exit__(self,
                 exc_type: ty.Optional[ty.Type[BaseException]],
                 exc_value: ty.Optional[BaseException],
                 traceback: ty.Optional[types.TracebackType],
                 ) -> ty.Optional[bool]:
        _tables_stack.remove(self)
        return None


_tables_stack: ty.List[RuleTable] = []


def active_tables_digest() -> str:
    """
    Combined digest of the non-empty tables currently entered, in entry
    order. Empty when no such table is active.
    """
    tables = [t for t in _tables_stack if t.rules]
    if not tables:
        return ''
    h = hashlib.sha256()
    for t in tables:
        h.update(t.digest.encode())
    return h.hexdigest()


_PROVENANCE_RANK = {'tabulated': 0, 'stroud': 1, 'handcoded': 2, 'gauss': 1}


def create_quadrature(cell: refcell.ReferenceCell,
                      degree: int,
                      tables: ty.Optional[ty.Sequence[RuleTable]] = None,
                      ) -> QuadratureRule:
    """
    Return the rule with fewest points among the tabulated, hand-coded and
    Stroud rules exact to ``degree``. Ties go to tabulated rules first, then
    to the Stroud rule.

    :param tables: tables to consider. If omitted, the tables currently
      entered as context managers are used.
    """
    if degree < 0:
        msg = f'quadrature degree must be nonnegative, got {degree}'
        raise ValueError(msg)
    if tables is None:
        tables = list(_tables_stack)
    candidates = [stroud_conical(cell, degree)]
    candidates.extend(r for r in _handcoded_rules()
                      if r.cell.dim == cell.dim and r.degree >= degree)
    for t in tables:
        candidates.extend(t.candidates(cell.dim, degree))
    best = min(candidates,
               key=lambda r: (r.npoints, _PROVENANCE_RANK[r.provenance],
                              r.degree))
    logger.debug(f'quadrature for simplex {cell.dim} degree {degree}: '
                 f'{best.provenance} with {best.npoints} points')
    return best


def entity_quadrature(cell: refcell.ReferenceCell,
                      entity: refcell.EntityRef,
                      degree: int,
                      scale_by_measure: bool = True,
                      ) -> ty.Tuple[QuadratureRule, ty.FloatArray,
                                    ty.FloatArray]:
    """
    Embed a rule of the entity's own dimension into the cell.

    :return: the entity-level rule, its points mapped into cell coordinates
      and the weights, scaled to the entity's measure if
      ``scale_by_measure``.
    """
    e = entity.entity_dim
    if e == 0:
        msg = 'vertices carry no quadrature'
        raise ValueError(msg)
    if e == cell.dim:
        rule = create_quadrature(cell, degree)
        return rule, rule.points, rule.weights
    rule = create_quadrature(refcell.make_cell(e), degree)
    origin, jac = cell.entity_transform(entity)
    points = origin + rule.points @ jac.T
    weights = rule.weights
    if scale_by_measure:
        weights = weights * cell.entity_scale(entity)
    return rule, np.asarray(points), np.asarray(weights)
