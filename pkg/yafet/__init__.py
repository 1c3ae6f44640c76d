# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
from __future__ import annotations

from . import (
    climodule,
    elemcache,
    elements,
    experiments,
    fdm,
    fields,
    meshes,
    polyset,
    quadrature,
    refcell,
    ty,
)


ReferenceCell = refcell.ReferenceCell
EntityRef = refcell.EntityRef
make_cell = refcell.make_cell


ExpansionSet = polyset.ExpansionSet


QuadratureRule = quadrature.QuadratureRule
RuleTable = quadrature.RuleTable
create_quadrature = quadrature.create_quadrature


CiarletElement = elements.CiarletElement
UnisolvenceError = elements.UnisolvenceError
create_element = elements.create_element


ElementCache = elemcache.ElementCache


SimplicialMesh = meshes.SimplicialMesh
DiscreteFunction = meshes.DiscreteFunction


ExperimentConfig = experiments.ExperimentConfig


cli = climodule.CLI()
