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

"""This module provides the region data types: region ids, region specs,
auxiliary search configuration and envelopes."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sortedcontainers import SortedList

from ..dist_core import FactorizationTemplate
from ..polyhedra import IneqSystem, LinIneq, extreme_points_2d
from ..utils import fraction_to_str

__all__ = [
    "RegionException",
    "RegionId",
    "RegionSpec",
    "AuxSearchConfig",
    "EnvelopePoint",
    "RegionEnvelope",
    "pareto_frontier",
]

PARETO_TOL = 1e-9


class RegionException(Exception):
    """Exception raised by the regions package."""

    pass


class RegionId(str, Enum):
    THM1_INNER = "THM1_INNER"
    COR1_DEGRADED_INNER = "COR1_DEGRADED_INNER"
    THM2_OUTER_DEGRADED = "THM2_OUTER_DEGRADED"
    THM3_SWITCH_CAPACITY = "THM3_SWITCH_CAPACITY"
    THM4_OUTER_GENERAL = "THM4_OUTER_GENERAL"
    THM5_NOISELESS_SWITCH = "THM5_NOISELESS_SWITCH"
    THM7_STRONG_RAW = "THM7_STRONG_RAW"
    THM7_STRONG_REDUCED = "THM7_STRONG_REDUCED"
    THM8_MACWT = "THM8_MACWT"
    APPB_RAW = "APPB_RAW"
    APPC_RAW = "APPC_RAW"

    @classmethod
    def parse(cls, value) -> "RegionId":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise RegionException(
                "Unknown region id {!r}, expected one of {}.".format(
                    value, ", ".join(m.value for m in cls)
                )
            )


@dataclass(frozen=True)
class RegionSpec:
    """A published or raw rate region.

    `kind` is one of "inner", "outer", "capacity" or "raw". Raw systems
    name the auxiliary rates to eliminate in `eliminate`; `published` names
    the region their projection is compared with.
    """

    id: RegionId
    system: IneqSystem
    template: FactorizationTemplate
    kind: str
    description: str = ""
    eliminate: Tuple[str, ...] = ()
    published: Optional[RegionId] = None
    params: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("inner", "outer", "capacity", "raw"):
            raise RegionException(f"Unknown region kind {self.kind!r}.")
        outside = self.system.random_variables() - set(self.template.variables)
        if outside:
            raise RegionException(
                f"{self.id.value} uses variables {sorted(outside)} outside its template."
            )
        unknown = set(self.eliminate) - set(self.system.rate_vars)
        if unknown:
            raise RegionException(f"Can not eliminate unknown rates {sorted(unknown)}.")

    @property
    def assumptions(self) -> Tuple[LinIneq, ...]:
        return self.system.assumptions

    @property
    def kept_rates(self) -> Tuple[str, ...]:
        return tuple(v for v in self.system.rate_vars if v not in self.eliminate)

    def to_json(self) -> dict:
        return {
            "id": self.id.value,
            "kind": self.kind,
            "description": self.description,
            "template": [str(s) for s in self.template],
            "eliminate": list(self.eliminate),
            "published": self.published.value if self.published else None,
            "params": {k: fraction_to_str(v) for k, v in self.params.items()},
            "system": self.system.to_json(),
        }


DEFAULT_DIRECTIONS = (
    (1.0, 0.0),
    (0.75, 0.25),
    (0.5, 0.5),
    (0.25, 0.75),
    (0.0, 1.0),
)


@dataclass
class AuxSearchConfig:
    """Auxiliary-distribution search settings.

    Attributes:
        samples: Number of sampled auxiliary laws.
        seed: Root seed, each sample derives its own stream.
        cardinalities: Alphabet size per auxiliary variable. Unlisted
            variables get `default_cardinality`, except Q which gets 1.
        directions: Weight vectors (l1, l2) >= 0 of the supporting lines.
        refinement_passes: Coordinate line-search passes on the best samples.
        refine_top: Number of best samples refined per direction.
        sampler: "dirichlet" or "grid".
        grid_steps: Simplex grid resolution of the grid sampler.
        concentration: Dirichlet parameter of the dirichlet sampler.
        vertex_mix: Probability that the dirichlet sampler draws a whole
            factor deterministic, every row a simplex vertex.
        assumption_tol: Samples violating an assumption by more are skipped.
    """

    samples: int = 200
    seed: int = 0
    cardinalities: Dict[str, int] = field(default_factory=dict)
    default_cardinality: int = 2
    directions: Sequence[Tuple[float, float]] = DEFAULT_DIRECTIONS
    refinement_passes: int = 3
    refine_top: int = 1
    sampler: str = "dirichlet"
    grid_steps: int = 2
    concentration: float = 1.0
    vertex_mix: float = 0.5
    assumption_tol: float = 1e-6

    def __post_init__(self):
        if self.samples < 1:
            raise RegionException("samples must be positive.")
        if self.sampler not in ("dirichlet", "grid"):
            raise RegionException(f"Unknown sampler {self.sampler!r}.")
        if self.grid_steps < 1:
            raise RegionException("grid_steps must be positive.")
        if self.concentration <= 0:
            raise RegionException("concentration must be positive.")
        if not 0 <= self.vertex_mix <= 1:
            raise RegionException("vertex_mix must lie in [0, 1].")
        if self.refinement_passes < 0 or self.refine_top < 1:
            raise RegionException("Invalid refinement settings.")
        dirs = []
        for d in self.directions:
            d = tuple(float(x) for x in d)
            if len(d) != 2 or min(d) < 0 or max(d) <= 0:
                raise RegionException(f"Invalid direction {d}.")
            dirs.append(d)
        self.directions = tuple(dirs)
        for name, card in self.cardinalities.items():
            if int(card) < 1:
                raise RegionException(f"Cardinality of {name} must be positive.")

    def cardinality(self, name: str) -> int:
        if name in self.cardinalities:
            return int(self.cardinalities[name])
        return 1 if name == "Q" else self.default_cardinality

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "cardinalities": dict(self.cardinalities),
            "default_cardinality": self.default_cardinality,
            "directions": [list(d) for d in self.directions],
            "refinement_passes": self.refinement_passes,
            "refine_top": self.refine_top,
            "sampler": self.sampler,
            "grid_steps": self.grid_steps,
            "concentration": self.concentration,
            "vertex_mix": self.vertex_mix,
            "assumption_tol": self.assumption_tol,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "AuxSearchConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(obj) - known
        if unknown:
            raise RegionException(f"Unknown search settings {sorted(unknown)}.")
        kwargs = dict(obj)
        if "directions" in kwargs:
            kwargs["directions"] = [tuple(d) for d in kwargs["directions"]]
        return cls(**kwargs)


@dataclass(frozen=True)
class EnvelopePoint:
    """One achieved rate pair and the auxiliary law achieving it."""

    rates: Tuple[float, float]
    directions: Tuple[Tuple[float, float], ...] = ()
    distribution: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "rates": list(self.rates),
            "directions": [list(d) for d in self.directions],
            "distribution": self.distribution,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "EnvelopePoint":
        return cls(
            tuple(float(x) for x in obj["rates"]),
            tuple(tuple(float(x) for x in d) for d in obj.get("directions", [])),
            obj.get("distribution"),
        )


def pareto_frontier(points: Sequence[EnvelopePoint], tol: float = PARETO_TOL) -> List[EnvelopePoint]:
    """Points not dominated by another, sorted by increasing first rate."""

    frontier = SortedList(key=lambda p: p.rates[0])
    best_second = -np.inf
    for p in sorted(points, key=lambda p: (-p.rates[0], -p.rates[1])):
        if p.rates[1] > best_second + tol:
            frontier.add(p)
            best_second = p.rates[1]
    return list(frontier)


class RegionEnvelope:
    """Achieved points of a region over an auxiliary search.

    Points form a Pareto frontier ordered by the first rate. The region is
    the down-closure of the points, or of their convex hull once convexified.
    """

    def __init__(
        self,
        region: RegionId,
        points: Sequence[EnvelopePoint],
        rate_vars: Sequence[str] = ("R1", "R2"),
        excluded: int = 0,
        evaluated: int = 0,
        convexified: bool = False,
        config: Optional[AuxSearchConfig] = None,
    ):
        self.region = region
        self.rate_vars = tuple(rate_vars)
        self.points = pareto_frontier(points)
        self.excluded = excluded
        self.evaluated = evaluated
        self.convexified = convexified
        self.config = config

    @classmethod
    def from_vertices(cls, region: RegionId, vertices: Sequence[Sequence[float]], rate_vars=("R1", "R2")):
        return cls(region, [EnvelopePoint((float(v[0]), float(v[1]))) for v in vertices], rate_vars)

    def rates(self) -> np.ndarray:
        return np.array([p.rates for p in self.points], dtype=float).reshape(-1, 2)

    def support(self, direction: Sequence[float]) -> float:
        """Largest `direction . R` over the points, -inf when empty."""
        if not self.points:
            return float("-inf")
        return float(np.max(self.rates() @ np.asarray(direction, dtype=float)))

    def best(self, direction: Sequence[float]) -> Optional[EnvelopePoint]:
        if not self.points:
            return None
        return self.points[int(np.argmax(self.rates() @ np.asarray(direction, dtype=float)))]

    def convexify(self) -> "RegionEnvelope":
        """Envelope of the time-sharing hull of the points."""
        if len(self.points) <= 1:
            return RegionEnvelope(
                self.region, self.points, self.rate_vars, self.excluded,
                self.evaluated, True, self.config,
            )
        rates = self.rates()
        r1max, r2max = rates[:, 0].max(), rates[:, 1].max()
        candidates = [tuple(r) for r in rates] + [(0.0, 0.0), (r1max, 0.0), (0.0, r2max)]
        hull = set(extreme_points_2d(candidates))
        by_rates = {p.rates: p for p in self.points}
        kept = [by_rates.get(v, EnvelopePoint(v)) for v in hull]
        return RegionEnvelope(
            self.region, kept, self.rate_vars, self.excluded, self.evaluated, True, self.config
        )

    def to_json(self) -> dict:
        return {
            "region": self.region.value,
            "rate_vars": list(self.rate_vars),
            "convexified": self.convexified,
            "evaluated": self.evaluated,
            "excluded": self.excluded,
            "config": self.config.to_json() if self.config else None,
            "points": [p.to_json() for p in self.points],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "RegionEnvelope":
        try:
            return cls(
                RegionId.parse(obj["region"]),
                [EnvelopePoint.from_json(p) for p in obj["points"]],
                obj.get("rate_vars", ("R1", "R2")),
                obj.get("excluded", 0),
                obj.get("evaluated", 0),
                obj.get("convexified", False),
                AuxSearchConfig.from_json(obj["config"]) if obj.get("config") else None,
            )
        except (KeyError, TypeError) as e:
            raise RegionException(f"Invalid envelope: {e}.")

    def csv_rows(self) -> List[List]:
        """Header `lambda1, lambda2, R1, R2` and one row per achieving
        direction; points without one get empty weights."""

        rows: List[List] = [["lambda1", "lambda2"] + list(self.rate_vars)]
        for p in self.points:
            for d in p.directions or ((None, None),):
                weights = ["" if w is None else w for w in d]
                rows.append(weights + [p.rates[0], p.rates[1]])
        return rows

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"RegionEnvelope({self.region.value}, {len(self.points)} points)"
