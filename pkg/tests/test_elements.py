import time

import numpy as np
import numpy.testing as npt
import pytest

from yafet import (
    elements,
    functionals,
    linalg,
    refcell,
)


VECTOR_FAMILIES = ['rt', 'bdm', 'n1', 'n2']

ELEMENTS = (
    [('lagrange', dim, k) for dim in (1, 2, 3) for k in (1, 2, 3)]
    + [('dg', dim, k) for dim in (1, 2, 3) for k in (0, 1, 2)]
    + [(family, dim, k) for family in VECTOR_FAMILIES
       for dim in (2, 3) for k in (1, 2, 3)]
)


def _random_points(dim, n=9, seed=1):
    bary = np.random.default_rng(seed).dirichlet(np.ones(dim + 1), n)
    return bary[:, 1:]


def _values(elem, points, order=0, alpha=None):
    if alpha is None:
        alpha = (0,) * elem.cell.dim
    return elem.tabulate(points, order)[alpha]


def _polynomial_field(dim, value_size, degree):
    a = np.array([[0.3, -0.2, 0.1], [-0.5, 0.7, 0.4], [0.6, 0.2, -0.9]])

    def u(x):
        lin = 1.0 + x @ a[:value_size, :dim].T
        return lin ** degree

    return u


@pytest.mark.parametrize('family,dim,degree,ndofs', [
    ('lagrange', 2, 3, 10),
    ('rt', 2, 2, 8),
    ('rt', 3, 2, 15),
    ('bdm', 2, 2, 12),
    ('rt', 2, 1, 3),
    ('n1', 3, 1, 6),
    ('n1', 3, 2, 20),
    ('n2', 3, 2, 30),
])
def test_dof_counts(family, dim, degree, ndofs):
    elem = elements.create_element(family, dim, degree)
    assert elem.space_dim == ndofs
    assert len(elem.dual) == ndofs


@pytest.mark.parametrize('family,dim,degree', ELEMENTS)
def test_dimension_formula(family, dim, degree):
    elem = elements.create_element(family, dim, degree)
    assert elem.space_dim == elements.expected_dimension(family, dim, degree)


@pytest.mark.parametrize('family,dim,degree', ELEMENTS)
def test_duality(family, dim, degree):
    elem = elements.create_element(family, dim, degree)
    values = _values(elem, elem.dual_points)
    gram = elem.apply_dual(values.transpose(0, 2, 1))
    npt.assert_allclose(gram, np.eye(elem.space_dim), atol=1e-9)


DUALITY_GRID = (
    [('lagrange', dim, k, variant) for dim in (2, 3) for k in range(1, 9)
     for variant in ('equispaced', 'spectral')]
    + [(family, 2, k, variant) for family in VECTOR_FAMILIES
       for k in range(1, 5) for variant in ('point', 'integral')]
    + [(family, 3, k, variant) for family in VECTOR_FAMILIES
       for k in range(1, 4) for variant in ('point', 'integral')]
)


@pytest.mark.slow
@pytest.mark.parametrize('family,dim,degree,variant', DUALITY_GRID)
def test_duality_all_variants(family, dim, degree, variant):
    elem = elements.create_element(family, dim, degree, variant)
    values = _values(elem, elem.dual_points)
    gram = elem.apply_dual(values.transpose(0, 2, 1))
    npt.assert_allclose(gram, np.eye(elem.space_dim), atol=1e-10)


@pytest.mark.slow
def test_lagrange_tet_degree_ten_build_time():
    start = time.perf_counter()
    elem = elements.create_element('lagrange', 3, 10)
    elapsed = time.perf_counter() - start
    assert elem.space_dim == 286
    assert elapsed <= 10.0


@pytest.mark.parametrize('family,dim,degree', [
    ('rt', 2, 2), ('rt', 3, 2), ('bdm', 2, 2), ('bdm', 3, 1),
    ('n1', 2, 2), ('n1', 3, 2), ('n2', 2, 2), ('n2', 3, 1),
])
def test_point_variants(family, dim, degree):
    elem = elements.create_element(family, dim, degree, 'point')
    values = _values(elem, elem.dual_points)
    gram = elem.apply_dual(values.transpose(0, 2, 1))
    npt.assert_allclose(gram, np.eye(elem.space_dim), atol=1e-9)


@pytest.mark.parametrize('family,dim,degree', [
    ('rt', 2, 2), ('rt', 3, 2), ('bdm', 2, 2), ('bdm', 3, 2),
    ('n1', 2, 3), ('n1', 3, 2), ('n2', 2, 2), ('n2', 3, 2),
])
def test_entity_dofs_match_dual(family, dim, degree):
    elem = elements.create_element(family, dim, degree)
    for (e, i), dofs in elem.entity_dofs.items():
        assert len(dofs) == elem.num_entity_dofs(e)
        for d in dofs:
            assert elem.dual[d].entity == refcell.EntityRef(e, i)


def test_entity_dof_layout():
    rt = elements.create_element('rt', 2, 2)
    assert [rt.num_entity_dofs(e) for e in range(3)] == [0, 2, 2]
    n1 = elements.create_element('n1', 3, 2)
    assert [n1.num_entity_dofs(e) for e in range(4)] == [0, 2, 2, 0]
    lag = elements.create_element('lagrange', 2, 3)
    assert [lag.num_entity_dofs(e) for e in range(3)] == [1, 2, 1]


@pytest.mark.parametrize('dim', [1, 2, 3])
@pytest.mark.parametrize('variant', ['equispaced', 'spectral'])
def test_partition_of_unity(dim, variant):
    elem = elements.create_element('lagrange', dim, 3, variant)
    pts = _random_points(dim)
    npt.assert_allclose(_values(elem, pts).sum(axis=0), 1.0, atol=1e-12)
    table = elem.tabulate(pts, order=1)
    for alpha, values in table.items():
        if sum(alpha) == 1:
            npt.assert_allclose(values.sum(axis=0), 0.0, atol=1e-10)


@pytest.mark.parametrize('family,dim,degree,field_degree', [
    ('lagrange', 2, 3, 3),
    ('dg', 3, 2, 2),
    ('rt', 2, 3, 2),
    ('rt', 3, 2, 1),
    ('bdm', 2, 2, 2),
    ('bdm', 3, 2, 2),
    ('n1', 2, 2, 1),
    ('n1', 3, 2, 1),
    ('n2', 3, 2, 2),
])
def test_interpolation_reproduces_space(family, dim, degree, field_degree):
    elem = elements.create_element(family, dim, degree)
    u = _polynomial_field(dim, elem.value_size, field_degree)
    coeffs = elem.interpolate(u)
    pts = _random_points(dim)
    approx = np.einsum('i,icp->pc', coeffs, _values(elem, pts))
    npt.assert_allclose(approx, u(pts), atol=1e-10)


def test_raviart_thomas_divergence():
    elem = elements.create_element('rt', 2, 1)
    coeffs = elem.interpolate(lambda x: x)
    pts = _random_points(2)
    table = elem.tabulate(pts, order=1)
    div = (np.einsum('i,ip->p', coeffs, table[(1, 0)][:, 0])
           + np.einsum('i,ip->p', coeffs, table[(0, 1)][:, 1]))
    npt.assert_allclose(div, 2.0, atol=1e-12)


def test_high_order_derivatives():
    elem = elements.create_element('lagrange', 1, 4)
    x = np.array([[0.3]])
    table = elem.tabulate(x, order=4)
    coeffs = elem.interpolate(lambda p: p[:, 0] ** 4)
    assert float(coeffs @ table[(4,)][:, 0, 0]) == pytest.approx(24.0)
    assert float(coeffs @ table[(3,)][:, 0, 0]) == pytest.approx(7.2)


def test_spectral_nodes_better_conditioned():
    eq = elements.create_element('lagrange', 2, 8, 'equispaced')
    sp = elements.create_element('lagrange', 2, 8, 'spectral')
    assert sp.condition_number < eq.condition_number


def test_duplicate_functional_is_not_unisolvent():
    cell = refcell.make_cell(2)
    space = elements.full_space(cell, 1)
    f0 = functionals.point_evaluation(cell, [0.0, 0.0])
    f2 = functionals.point_evaluation(cell, [0.0, 1.0])
    with pytest.raises(elements.UnisolvenceError) as excinfo:
        elements.build_nodal_basis(space, [f0, f0, f2])
    assert 'unisolvence failure' in str(excinfo.value)
    assert isinstance(excinfo.value, linalg.NumericalError)


def test_dual_size_mismatch():
    cell = refcell.make_cell(2)
    space = elements.full_space(cell, 1)
    f0 = functionals.point_evaluation(cell, [0.0, 0.0])
    with pytest.raises(ValueError):
        elements.build_nodal_basis(space, [f0])


@pytest.mark.parametrize('variant,expected', [
    ('point', ('point', 0)),
    ('integral', ('integral', 0)),
    ('integral(4)', ('integral', 4)),
])
def test_parse_variant(variant, expected):
    assert elements.parse_variant(variant) == expected


@pytest.mark.parametrize('variant', ['point(2)', 'integral()', 'gauss'])
def test_parse_variant_invalid(variant):
    with pytest.raises(ValueError):
        elements.parse_variant(variant)


def test_unknown_family():
    with pytest.raises(ValueError):
        elements.create_element('hermite', 2, 3)


def test_invalid_degrees():
    with pytest.raises(ValueError):
        elements.create_element('lagrange', 2, 0)
    with pytest.raises(ValueError):
        elements.create_element('rt', 2, 0)
    with pytest.raises(ValueError):
        elements.create_element('n1', 1, 1)


def test_apply_dual_shape_checked():
    elem = elements.create_element('rt', 2, 1)
    npts = elem.dual_points.shape[0]
    with pytest.raises(ValueError):
        elem.apply_dual(np.zeros(npts))


def test_dg_degree_zero():
    elem = elements.create_element('dg', 2, 0)
    assert elem.space_dim == 1
    npt.assert_allclose(elem.dual_points, [[1.0 / 3.0, 1.0 / 3.0]])
