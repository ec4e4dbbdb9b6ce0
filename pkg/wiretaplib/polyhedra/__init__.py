#
# Copyright 2021 Splunk Inc.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Exact-rational rate region polyhedra: elimination, redundancy removal,
symbolic comparison and numerical instantiation."""

from .comparison import EqualityVerdict, implied_by, symbolic_equal
from .elimination import EliminationStats, fm_eliminate, fm_project
from .numeric import (
    AssumptionWarning,
    NumericRegion,
    evaluate_constant,
    extreme_points_2d,
    numeric_region,
)
from .redundancy import Certificate, RedundancyMode, implies, remove_redundant
from .system import IneqSystem, LinIneq, PolyhedraException, RateVar, nonnegativity

__all__ = [
    "AssumptionWarning",
    "Certificate",
    "EliminationStats",
    "EqualityVerdict",
    "IneqSystem",
    "LinIneq",
    "NumericRegion",
    "PolyhedraException",
    "RateVar",
    "RedundancyMode",
    "evaluate_constant",
    "extreme_points_2d",
    "fm_eliminate",
    "fm_project",
    "implied_by",
    "implies",
    "nonnegativity",
    "numeric_region",
    "remove_redundant",
    "symbolic_equal",
]
