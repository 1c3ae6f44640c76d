# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
"""
Named analytic fields used by the experiments.

Every callable takes an ``(npoints, dim)`` array. Scalar quantities come
back with shape ``(npoints,)`` and vector quantities with shape
``(npoints, ncomp)``.
"""
from __future__ import annotations

import numpy as np

from . import ty


FieldFn = ty.Callable[[ty.FloatArray], ty.FloatArray]


class AnalyticField(ty.NamedTuple):
    name: str
    dim: int
    value_size: int
    value: FieldFn
    grad: ty.Optional[FieldFn] = None
    div: ty.Optional[FieldFn] = None
    curl: ty.Optional[FieldFn] = None

    def __call__(self, x: ty.FloatArray) -> ty.FloatArray:
        return self.value(x)


def _runge(dim: int, a: float) -> AnalyticField:
    def value(x: ty.FloatArray) -> ty.FloatArray:
        return np.asarray(1.0 / (1.0 + a * np.sum(x * x, axis=1)))

    def grad(x: ty.FloatArray) -> ty.FloatArray:
        f = value(x)
        return np.asarray(-2.0 * a * x * (f * f)[:, None])

    return AnalyticField(f'runge{dim}d', dim, 1, value, grad=grad)


def _curl3d_value(x: ty.FloatArray) -> ty.FloatArray:
    x0, x1, x2 = x[:, 0], x[:, 1], x[:, 2]
    return np.stack([
        -x0 * np.sin(x1) - x0 * x1 * np.cos(x2),
        x1 * np.exp(x2) * np.sin(x0) - np.cos(x1),
        x1 * np.sin(x2) - np.exp(x2) * np.sin(x0),
    ], axis=1)


def _curl3d_div(x: ty.FloatArray) -> ty.FloatArray:
    return np.zeros(x.shape[0])


def _curl3d_curl(x: ty.FloatArray) -> ty.FloatArray:
    x0, x1, x2 = x[:, 0], x[:, 1], x[:, 2]
    ez = np.exp(x2)
    return np.stack([
        np.sin(x2) - x1 * ez * np.sin(x0),
        x0 * x1 * np.sin(x2) + ez * np.cos(x0),
        x1 * ez * np.cos(x0) + x0 * np.cos(x1) + x0 * np.cos(x2),
    ], axis=1)


def _sinexp_value(x: ty.FloatArray) -> ty.FloatArray:
    x0, x1, x2 = x[:, 0], x[:, 1], x[:, 2]
    return np.stack([
        np.sin(x0) * x1 * np.exp(x2),
        np.sin(x2) * x0 * x1,
        np.cos(x1) * x0,
    ], axis=1)


def _sinexp_div(x: ty.FloatArray) -> ty.FloatArray:
    x0, x1, x2 = x[:, 0], x[:, 1], x[:, 2]
    return np.asarray(np.cos(x0) * x1 * np.exp(x2) + x0 * np.sin(x2))


RUNGE1D = _runge(1, 25.0)
RUNGE2D = _runge(2, 12.5)
RUNGE3D = _runge(3, 25.0 / 3.0)

# Divergence free; the curl of SINEXP.
CURL3D = AnalyticField('curl3d', 3, 3, _curl3d_value,
                       div=_curl3d_div, curl=_curl3d_curl)

SINEXP = AnalyticField('sinexp', 3, 3, _sinexp_value,
                       div=_sinexp_div, curl=_curl3d_value)


_FIELDS = {f.name: f for f in (RUNGE1D, RUNGE2D, RUNGE3D, CURL3D, SINEXP)}


def get_field(name: str) -> AnalyticField:
    try:
        return _FIELDS[name]
    except KeyError:
        msg = f'unknown field: {name!r}'
        raise ValueError(msg) from None


def runge(dim: int) -> AnalyticField:
    return get_field(f'runge{dim}d')


def field_names() -> ty.List[str]:
    return sorted(_FIELDS)
