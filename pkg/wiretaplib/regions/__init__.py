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

"""Published and raw rate regions, their evaluation, envelope search and
bound comparison."""

from .bounds import ContainmentReport, compare_bounds, containment_violation
from .evaluation import (
    REDUCTIONS,
    Derivation,
    RegionEvaluation,
    RemarkCheck,
    check_remark2,
    derive_from_raw,
    evaluate,
    reduce_system,
    reduction_template,
    reference_region,
    sample_remark2,
    screening_joints,
    thm7_full_count,
)
from .fixtures import (
    builtin_ids,
    builtin_system,
    decodability_family,
    osrb_secrecy_family,
    remark_assumption,
)
from .search import convexify, default_observations, search_envelope, simplex_grid
from .spec import (
    AuxSearchConfig,
    EnvelopePoint,
    RegionEnvelope,
    RegionException,
    RegionId,
    RegionSpec,
    pareto_frontier,
)

__all__ = [
    "AuxSearchConfig",
    "ContainmentReport",
    "Derivation",
    "EnvelopePoint",
    "REDUCTIONS",
    "RegionEnvelope",
    "RegionEvaluation",
    "RegionException",
    "RegionId",
    "RegionSpec",
    "RemarkCheck",
    "builtin_ids",
    "builtin_system",
    "check_remark2",
    "compare_bounds",
    "containment_violation",
    "convexify",
    "decodability_family",
    "default_observations",
    "derive_from_raw",
    "evaluate",
    "osrb_secrecy_family",
    "pareto_frontier",
    "reduce_system",
    "reduction_template",
    "reference_region",
    "remark_assumption",
    "sample_remark2",
    "screening_joints",
    "search_envelope",
    "simplex_grid",
    "thm7_full_count",
]
