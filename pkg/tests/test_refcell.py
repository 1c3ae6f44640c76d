import math

import numpy as np
import numpy.testing as npt
import pytest

from yafet import refcell


def test_triangle_topology():
    tri = refcell.make_cell(2)
    assert tri.topology[1] == [(0, 1), (0, 2), (1, 2)]
    assert tri.num_entities(2) == 1
    assert tri.measure == pytest.approx(0.5)


def test_triangle_normals():
    tri = refcell.make_cell(2)
    npt.assert_allclose(tri.facet_normal(0), [0.0, -1.0])
    npt.assert_allclose(tri.facet_normal(1), [-1.0, 0.0])
    s = 1.0 / math.sqrt(2.0)
    npt.assert_allclose(tri.facet_normal(2), [s, s])


def test_tetrahedron_normals_point_outward():
    tet = refcell.make_cell(3)
    s = 1.0 / math.sqrt(3.0)
    npt.assert_allclose(tet.facet_normal(3), [s, s, s])
    for f in range(4):
        facet = refcell.EntityRef(2, f)
        mid = tet.entity_vertices(facet).mean(axis=0)
        assert np.dot(tet.facet_normal(f), mid - tet.centroid) > 0.0


def test_interval_normals():
    line = refcell.make_cell(1)
    # facet 0 is vertex 0
    npt.assert_allclose(line.facet_normal(0), [-1.0])
    npt.assert_allclose(line.facet_normal(1), [1.0])


def test_entity_measure():
    tri = refcell.make_cell(2)
    tet = refcell.make_cell(3)
    assert tri.entity_measure(refcell.EntityRef(1, 2)) == pytest.approx(
        math.sqrt(2.0))
    assert tet.entity_measure(refcell.EntityRef(2, 3)) == pytest.approx(
        math.sqrt(3.0) / 2.0)


def test_facet_tangents_orthonormal():
    tet = refcell.make_cell(3)
    for f in range(4):
        t = tet.facet_tangents(f)
        npt.assert_allclose(t @ t.T, np.eye(2), atol=1e-14)
        npt.assert_allclose(t @ tet.facet_normal(f), 0.0, atol=1e-14)


def test_facet_tangents_follow_vertex_order():
    tet = refcell.make_cell(3)
    for f in range(4):
        _, jac = tet.entity_transform(refcell.EntityRef(2, f))
        t = tet.facet_tangents(f)
        first = jac[:, 0] / np.linalg.norm(jac[:, 0])
        npt.assert_allclose(t[0], first, atol=1e-14)
        # second tangent points to the same side as the second edge
        assert t[1] @ jac[:, 1] > 0.0


def test_edge_tangent_direction():
    tri = refcell.make_cell(2)
    s = 1.0 / math.sqrt(2.0)
    npt.assert_allclose(tri.edge_tangent(2), [-s, s])


def test_make_points_interior():
    tri = refcell.make_cell(2)
    pts = tri.make_points(refcell.EntityRef(2, 0), 3)
    npt.assert_allclose(pts, [[1.0 / 3.0, 1.0 / 3.0]])


def test_make_points_edge():
    tri = refcell.make_cell(2)
    pts = tri.make_points(refcell.EntityRef(1, 0), 3)
    npt.assert_allclose(np.sort(pts[:, 0]), [1.0 / 3.0, 2.0 / 3.0])
    npt.assert_allclose(pts[:, 1], 0.0)


def test_make_points_vertex():
    tet = refcell.make_cell(3)
    npt.assert_allclose(tet.make_points(refcell.EntityRef(0, 2), 4),
                        [[0.0, 1.0, 0.0]])


def test_spectral_points_inside():
    tet = refcell.make_cell(3)
    pts = tet.make_points(refcell.EntityRef(3, 0), 8, 'spectral')
    assert pts.shape == (35, 3)
    assert tet.contains(pts)


@pytest.mark.parametrize('entity', [(1, 3), (4, 0), (-1, 0)])
def test_invalid_entity(entity):
    tri = refcell.make_cell(2)
    with pytest.raises(ValueError):
        tri.entity_vertex_ids(refcell.EntityRef(*entity))


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        refcell.ReferenceCell(4)


def test_make_cell_is_shared():
    assert refcell.make_cell(2) is refcell.make_cell(2)
