import numpy as np
import numpy.testing as npt
import pytest

from yafet import fields


POINTS = np.array([[0.1, 0.2, 0.3], [0.7, 0.4, 0.2], [0.3, 0.9, 0.6]])

H = 1e-5


def _jacobian(f, x):
    # (npoints, ncomp, dim) by central differences
    cols = []
    for d in range(x.shape[1]):
        step = np.zeros(x.shape[1])
        step[d] = H
        cols.append((f(x + step) - f(x - step)) / (2.0 * H))
    return np.stack(cols, axis=-1)


def _curl(f, x):
    j = _jacobian(f, x)
    return np.stack([j[:, 2, 1] - j[:, 1, 2],
                     j[:, 0, 2] - j[:, 2, 0],
                     j[:, 1, 0] - j[:, 0, 1]], axis=1)


def test_curl3d_is_divergence_free():
    j = _jacobian(fields.CURL3D.value, POINTS)
    npt.assert_allclose(np.trace(j, axis1=1, axis2=2), 0.0, atol=1e-8)
    npt.assert_allclose(fields.CURL3D.div(POINTS), 0.0)


def test_curl3d_is_curl_of_sinexp():
    npt.assert_allclose(_curl(fields.SINEXP.value, POINTS),
                        fields.CURL3D.value(POINTS), atol=1e-8)
    npt.assert_allclose(fields.SINEXP.curl(POINTS),
                        fields.CURL3D.value(POINTS))


def test_curl3d_curl():
    npt.assert_allclose(_curl(fields.CURL3D.value, POINTS),
                        fields.CURL3D.curl(POINTS), atol=1e-8)


def test_sinexp_divergence():
    j = _jacobian(fields.SINEXP.value, POINTS)
    npt.assert_allclose(np.trace(j, axis1=1, axis2=2),
                        fields.SINEXP.div(POINTS), atol=1e-8)


@pytest.mark.parametrize('dim', [1, 2, 3])
def test_runge(dim):
    f = fields.runge(dim)
    x = POINTS[:, :dim]
    npt.assert_allclose(f(np.zeros((1, dim))), [1.0])
    grad = _jacobian(lambda y: f(y)[:, None], x)[:, 0, :]
    npt.assert_allclose(f.grad(x), grad, atol=1e-7)


def test_runge_scaling():
    for f in (fields.RUNGE1D, fields.RUNGE2D, fields.RUNGE3D):
        npt.assert_allclose(f(np.ones((1, f.dim))), [1.0 / 26.0])


def test_get_field():
    assert fields.get_field('curl3d') is fields.CURL3D
    assert 'sinexp' in fields.field_names()
    with pytest.raises(ValueError):
        fields.get_field('nope')
