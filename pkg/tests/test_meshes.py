import math

import numpy as np
import numpy.testing as npt
import pytest

from yafet import (
    elements,
    fields,
    meshes,
    quadrature,
)


def _field(dim, value_size, value, **derivatives):
    return fields.AnalyticField('test', dim, value_size, value, **derivatives)


def _smooth(dim):
    def value(x):
        cols = [np.sin(x[:, 0] + 2.0 * x[:, 1]),
                np.cos(x[:, 0] * x[:, 1]),
                np.exp(0.5 * x[:, 0]) * x[:, -1]]
        return np.stack(cols[:dim], axis=1)
    return value


LINEAR_2D = _field(
    2, 2, lambda x: np.stack([x[:, 0] + x[:, 1], 2.0 * x[:, 0] - x[:, 1]], 1),
    div=lambda x: np.zeros(len(x)),
    curl=lambda x: np.ones(len(x)),
)

LINEAR_3D = _field(
    3, 3, lambda x: np.stack([x[:, 0] + x[:, 1], x[:, 1] - x[:, 2],
                              2.0 * x[:, 0] + x[:, 2]], 1),
    div=lambda x: np.full(len(x), 3.0),
    curl=lambda x: np.tile([1.0, -2.0, -1.0], (len(x), 1)),
)

CONSTANT_3D = _field(
    3, 3, lambda x: np.tile([1.0, 2.0, 3.0], (len(x), 1)),
    div=lambda x: np.zeros(len(x)),
    curl=lambda x: np.zeros((len(x), 3)),
)


@pytest.mark.parametrize('mesh,ncells,volume', [
    (meshes.interval_mesh(3), 3, 1.0),
    (meshes.unit_square_mesh(1, 1), 2, 1.0),
    (meshes.unit_square_mesh(4, 4), 32, 1.0),
    (meshes.unit_cube_mesh(1, 1, 1), 6, 1.0),
    (meshes.box_mesh([2, 3], -1.0, 1.0), 12, 4.0),
    (meshes.reference_mesh(3), 1, 1.0 / 6.0),
])
def test_mesh_sizes(mesh, ncells, volume):
    assert mesh.num_cells == ncells
    assert mesh.volume() == pytest.approx(volume)


def test_square_entities():
    mesh = meshes.unit_square_mesh(2, 2)
    assert mesh.num_entities(0) == 9
    assert mesh.num_entities(1) == 16
    assert len(mesh.interior_facets()) == 8


def test_cube_entities():
    mesh = meshes.unit_cube_mesh(1, 1, 1)
    assert mesh.num_entities(0) == 8
    assert mesh.num_entities(1) == 19
    assert mesh.num_entities(2) == 18
    assert len(mesh.interior_facets()) == 6


def test_cells_sorted():
    mesh = meshes.unit_cube_mesh(2, 1, 1)
    assert np.all(np.diff(mesh.cells, axis=1) > 0)


def test_degenerate_cell_rejected():
    with pytest.raises(ValueError):
        meshes.SimplicialMesh([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
                              [[0, 1, 2]])


def test_dofmap_sizes():
    mesh = meshes.unit_square_mesh(1, 1)
    assert mesh.dofmap(elements.create_element('lagrange', 2, 2)).size == 9
    mesh = meshes.unit_square_mesh(2, 2)
    assert mesh.dofmap(elements.create_element('n1', 2, 1)).size == 16
    dofmap = mesh.dofmap(elements.create_element('dg', 2, 1))
    assert dofmap.size == 3 * mesh.num_cells
    assert np.all(dofmap.owned)


def test_dofmap_dimension_mismatch():
    mesh = meshes.unit_square_mesh(1, 1)
    with pytest.raises(ValueError, match='dimension mismatch'):
        mesh.dofmap(elements.create_element('rt', 3, 1))


def test_evaluate_at_physical_points():
    mesh = meshes.unit_square_mesh(2, 2)
    elem = elements.create_element('lagrange', 2, 1)

    def u(x):
        return 1.0 + x[:, 0] + 2.0 * x[:, 1]

    fh = meshes.DiscreteFunction(mesh, elem,
                                 meshes.global_interpolate(mesh, elem, u))
    x = mesh.vertices[mesh.cells[3]].mean(axis=0)[None, :]
    npt.assert_allclose(fh.evaluate(3, x)[:, 0], u(x))


def test_lagrange_reproduction():
    mesh = meshes.unit_square_mesh(2, 2)
    elem = elements.create_element('lagrange', 2, 2)
    u = _field(2, 1, lambda x: x[:, 0] ** 2 + x[:, 0] * x[:, 1])
    coeffs = meshes.global_interpolate(mesh, elem, u)
    assert meshes.error_norms(mesh, elem, coeffs, u, 'L2') < 1e-12
    assert meshes.error_norms(mesh, elem, coeffs, u, 'Linf') < 1e-12


@pytest.mark.parametrize('mesh,family,degree,field,norm', [
    (meshes.unit_square_mesh(2, 2), 'rt', 2, LINEAR_2D, 'Hdiv'),
    (meshes.unit_square_mesh(2, 2), 'bdm', 1, LINEAR_2D, 'Hdiv'),
    (meshes.unit_square_mesh(2, 2), 'n1', 2, LINEAR_2D, 'Hcurl'),
    (meshes.unit_square_mesh(2, 2), 'n2', 1, LINEAR_2D, 'Hcurl'),
    (meshes.unit_cube_mesh(1, 1, 1), 'rt', 1, CONSTANT_3D, 'Hdiv'),
    (meshes.unit_cube_mesh(1, 1, 1), 'n1', 1, CONSTANT_3D, 'Hcurl'),
    (meshes.unit_cube_mesh(1, 1, 1), 'bdm', 1, LINEAR_3D, 'Hdiv'),
    (meshes.unit_cube_mesh(1, 1, 1), 'n2', 1, LINEAR_3D, 'Hcurl'),
])
def test_vector_reproduction(mesh, family, degree, field, norm):
    elem = elements.create_element(family, mesh.dim, degree)
    coeffs = meshes.global_interpolate(mesh, elem, field)
    assert meshes.error_norms(mesh, elem, coeffs, field, 'L2') < 1e-11
    assert meshes.error_norms(mesh, elem, coeffs, field, norm) < 1e-10


def _facet_frame(mesh, facet):
    verts = mesh.vertices[mesh.entity_vertices(mesh.dim - 1)[facet]]
    if mesh.dim == 2:
        t = verts[1] - verts[0]
        return verts, np.array([t[1], -t[0]]), t
    n = np.cross(verts[1] - verts[0], verts[2] - verts[0])
    return verts, n, verts[1] - verts[0]


@pytest.mark.parametrize('mesh,family,degree,variant,tangential', [
    (meshes.unit_square_mesh(2, 2), 'rt', 2, 'integral', False),
    (meshes.unit_square_mesh(2, 2), 'bdm', 2, 'point', False),
    (meshes.unit_square_mesh(2, 2), 'n1', 2, 'integral', True),
    (meshes.unit_cube_mesh(1, 1, 1), 'rt', 2, 'point', False),
    (meshes.unit_cube_mesh(1, 1, 1), 'n1', 2, 'integral', True),
])
def test_interelement_continuity(mesh, family, degree, variant, tangential):
    elem = elements.create_element(family, mesh.dim, degree, variant)
    coeffs = meshes.global_interpolate(mesh, elem, _smooth(mesh.dim))
    fh = meshes.DiscreteFunction(mesh, elem, coeffs)
    facet_cells = mesh.facet_cells()
    bary = np.random.default_rng(3).dirichlet(np.ones(mesh.dim), 4)
    for f in mesh.interior_facets():
        verts, normal, tangent = _facet_frame(mesh, f)
        x = bary @ verts
        left = fh.evaluate(facet_cells[f, 0], x)
        right = fh.evaluate(facet_cells[f, 1], x)
        direction = tangent if tangential else normal
        npt.assert_allclose(left @ direction, right @ direction, atol=1e-12)


def test_raviart_thomas_convergence():
    elem = elements.create_element('rt', 3, 2)
    errors = []
    for n in (1, 2):
        mesh = meshes.unit_cube_mesh(n, n, n)
        coeffs = meshes.global_interpolate(mesh, elem, fields.SINEXP)
        errors.append(meshes.error_norms(mesh, elem, coeffs, fields.SINEXP))
    assert errors[0] / errors[1] > 2.0


def test_divergence_norm():
    mesh = meshes.unit_cube_mesh(1, 1, 1)
    elem = elements.create_element('rt', 3, 1)
    coeffs = meshes.global_interpolate(mesh, elem, lambda x: x)
    assert meshes.divergence_norm(mesh, elem, coeffs) == pytest.approx(3.0)


def test_error_norm_incompatible():
    mesh = meshes.unit_square_mesh(1, 1)
    elem = elements.create_element('lagrange', 2, 1)
    u = _field(2, 1, lambda x: x[:, 0])
    coeffs = meshes.global_interpolate(mesh, elem, u)
    with pytest.raises(ValueError):
        meshes.error_norms(mesh, elem, coeffs, u, 'Hdiv')
    with pytest.raises(ValueError):
        meshes.error_norms(mesh, elem, coeffs, u, 'H2')


def test_broken_h1_norm():
    mesh = meshes.unit_square_mesh(2, 2)
    elem = elements.create_element('lagrange', 2, 2)
    u = _field(2, 1, lambda x: x[:, 0] * x[:, 1],
               grad=lambda x: np.stack([x[:, 1], x[:, 0]], 1))
    coeffs = meshes.global_interpolate(mesh, elem, u)
    assert meshes.error_norms(mesh, elem, coeffs, u, 'brokenH1') < 1e-11


def test_l2_project_mean():
    mesh = meshes.reference_mesh(2)
    dg0 = elements.create_element('dg', 2, 0)
    coeffs = meshes.l2_project(mesh, dg0, lambda x: x[:, 0])
    npt.assert_allclose(coeffs, [[1.0 / 3.0]])


def test_l2_project_vector():
    mesh = meshes.unit_square_mesh(1, 1)
    dg1 = elements.create_element('dg', 2, 1)
    coeffs = meshes.l2_project(mesh, dg1, lambda x: x)
    assert coeffs.shape == (2, 3, 2)
    pts = np.array([[0.2, 0.3], [0.5, 0.1]])
    values = meshes.cellwise_values(dg1, coeffs, pts)
    npt.assert_allclose(values, mesh.physical_points(pts), atol=1e-13)


def test_l2_project_needs_discontinuous_target():
    mesh = meshes.unit_square_mesh(1, 1)
    with pytest.raises(ValueError):
        meshes.l2_project(mesh, elements.create_element('lagrange', 2, 1),
                          lambda x: x[:, 0])


POLY_HDIV_2D = _field(
    2, 2, lambda x: np.stack([x[:, 0] ** 2, x[:, 0] * x[:, 1]], 1),
    div=lambda x: 3.0 * x[:, 0],
    curl=lambda x: x[:, 1],
)

POLY_HDIV_3D = _field(
    3, 3, lambda x: np.stack([x[:, 0] * x[:, 1], x[:, 1] * x[:, 2],
                              x[:, 0] * x[:, 2]], 1),
    div=lambda x: x.sum(axis=1),
)

POLY_HCURL_3D = _field(
    3, 3, lambda x: np.stack([np.zeros(len(x)), np.zeros(len(x)),
                              x[:, 0] * x[:, 1]], 1),
    curl=lambda x: np.stack([x[:, 0], -x[:, 1], np.zeros(len(x))], 1),
)


@pytest.mark.parametrize('mesh,family,degree,variant,field', [
    (meshes.unit_square_mesh(2, 2), 'rt', 2, 'integral(2)', POLY_HDIV_2D),
    (meshes.unit_square_mesh(2, 2), 'n1', 2, 'integral(2)', POLY_HDIV_2D),
    (meshes.reference_mesh(3), 'rt', 1, 'integral(2)', POLY_HDIV_3D),
    (meshes.unit_cube_mesh(1, 1, 1), 'rt', 1, 'integral(2)', POLY_HDIV_3D),
    (meshes.unit_cube_mesh(1, 1, 1), 'n1', 1, 'integral(1)', POLY_HCURL_3D),
    (meshes.unit_cube_mesh(1, 1, 1), 'n2', 1, 'integral(1)', POLY_HCURL_3D),
    (meshes.unit_cube_mesh(1, 1, 1), 'n2', 2, 'integral(1)', POLY_HCURL_3D),
])
def test_commuting_diagram(mesh, family, degree, variant, field):
    elem = elements.create_element(family, mesh.dim, degree, variant)
    assert meshes.commuting_defect(mesh, elem, field) < 1e-11


def test_commuting_defect_lowest_second_kind_nedelec():
    mesh = meshes.unit_cube_mesh(1, 1, 1)
    elem = elements.create_element('n2', 3, 1, 'integral')
    assert math.isfinite(meshes.commuting_defect(mesh, elem, fields.CURL3D))
    elem = elements.create_element('n2', 3, 1, 'integral(4)')
    assert meshes.commuting_defect(mesh, elem, fields.CURL3D) < 1e-2


def test_pull_back_unknown_mapping():
    mesh = meshes.reference_mesh(2)
    with pytest.raises(ValueError):
        meshes.pull_back(mesh, 'double_piola', np.zeros((1, 1, 2)))


def test_physical_points_shape():
    mesh = meshes.unit_cube_mesh(1, 1, 1)
    x = mesh.physical_points([[0.25, 0.25, 0.25]])
    assert x.shape == (6, 1, 3)
    assert np.all((x > 0.0) & (x < 1.0))
    assert math.isclose(float(np.abs(mesh.dets).sum()), 6.0)


@pytest.mark.parametrize('variant,facet_degree,cell_degree', [
    ('integral', 3, 2),
    ('integral(3)', 6, 5),
])
def test_rt2_interpolant_matches_physical_moments(variant, facet_degree,
                                                  cell_degree):
    # The global interpolant reproduces, on every physical cell, the normal
    # moments against P1 on each face and the cell mean of the field.
    mesh = meshes.unit_cube_mesh(2, 2, 2)
    elem = elements.create_element('rt', 3, 2, variant)
    fh = meshes.DiscreteFunction(
        mesh, elem, meshes.global_interpolate(mesh, elem, fields.SINEXP))
    ref = mesh.reference_cell

    for facet in ref.entities(2):
        local, points, weights = quadrature.entity_quadrature(
            ref, facet, facet_degree)
        tests = np.vstack([np.ones(local.npoints), local.points.T])
        x = mesh.physical_points(points)
        error = fh.values(points) - fields.SINEXP(x.reshape(-1, 3)).reshape(
            x.shape)
        normals = np.einsum('cji,j->ci', mesh.inverse_jacobians,
                            ref.facet_normal(facet.entity_id))
        flux = np.einsum('cpi,ci->cp', error, normals)
        npt.assert_allclose((flux * weights) @ tests.T, 0.0, atol=1e-12)

    rule = quadrature.create_quadrature(ref, cell_degree)
    x = mesh.physical_points(rule.points)
    error = fh.values(rule.points) - fields.SINEXP(x.reshape(-1, 3)).reshape(
        x.shape)
    npt.assert_allclose(np.einsum('cpi,p->ci', error, rule.weights), 0.0,
                        atol=1e-12)
