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

"""This module provides the auxiliary-distribution search behind region
envelopes.

Auxiliary laws are sampled row by row (Dirichlet or a simplex grid), the
region is evaluated on each sampled joint, and the best sample per
direction is refined by coordinate line searches inside the simplex.
"""

import itertools
import time
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from ..dist_core import (
    DEGRADED_SWITCH_OBSERVATIONS,
    NOISELESS_SWITCH_OBSERVATIONS,
    Factor,
    FactorizationSpec,
    FactorShape,
    VariableSpec,
    compose_joint,
    random_table,
)
from ..log import Logs
from ..polyhedra import IneqSystem, numeric_region
from ..utils import derive_rng
from .evaluation import _resolve
from .spec import (
    AuxSearchConfig,
    EnvelopePoint,
    RegionEnvelope,
    RegionException,
    RegionId,
    RegionSpec,
)

__all__ = ["default_observations", "simplex_grid", "search_envelope", "convexify"]

logger = Logs().get_logger("regions")

INPUTS = ("X1", "X2")
EXCLUDED = -1e9
RATE_PAIR = ("R1", "R2")


def default_observations(channel: FactorizationSpec) -> Dict[str, Tuple[str, ...]]:
    """Observation aliases implied by the switch variables of `channel`."""

    names = {v.name for v in channel.variables}
    if {"S1", "S2"} <= names:
        return dict(NOISELESS_SWITCH_OBSERVATIONS)
    if "S" in names:
        return dict(DEGRADED_SWITCH_OBSERVATIONS)
    return {}


def simplex_grid(width: int, steps: int) -> np.ndarray:
    """All points of the probability simplex with coordinates in
    {0, 1/steps, ..., 1}."""

    points = [
        np.array(c, dtype=float) / steps
        for c in itertools.product(range(steps + 1), repeat=width)
        if sum(c) == steps
    ]
    return np.array(points).reshape(-1, width)


def _rate_points(region) -> np.ndarray:
    """Extreme points of the region projected onto (R1, R2)."""
    return np.array(region.project(RATE_PAIR), dtype=float).reshape(-1, 2)


class _Problem:
    """Auxiliary factors to search over, the fixed channel and the
    objective."""

    def __init__(
        self,
        spec: RegionSpec,
        channel: FactorizationSpec,
        config: AuxSearchConfig,
        observations: Mapping[str, Sequence[str]],
    ):
        outputs = {v.name for v in channel.variables} - set(INPUTS)
        self.channel = [f for f in channel.factors if not set(f.target_names) <= set(INPUTS)]
        cards = {v.name: v.cardinality for f in channel.factors for v in f.targets + f.givens}
        self.shapes: List[FactorShape] = [
            s for s in spec.template if not set(s.targets) & outputs
        ]
        if not self.shapes:
            raise RegionException(f"{spec.id.value} has nothing to search over.")
        for s in self.shapes:
            for v in s.targets:
                cards.setdefault(v, config.cardinality(v))
        self.cards = cards
        self.specs = [
            (
                [VariableSpec(t, cards[t]) for t in s.targets],
                [VariableSpec(g, cards[g]) for g in s.givens],
            )
            for s in self.shapes
        ]
        self.rows = [int(np.prod([g.cardinality for g in gs], dtype=np.int64)) for _, gs in self.specs]
        self.widths = [int(np.prod([t.cardinality for t in ts], dtype=np.int64)) for ts, _ in self.specs]
        self.system: IneqSystem = spec.system.substitute(observations) if observations else spec.system
        defined = set(cards)
        missing = sorted(self.system.random_variables() - defined)
        if missing:
            raise RegionException(f"Search can not evaluate variables {missing}.")
        self.config = config
        self.grids = [simplex_grid(w, config.grid_steps) for w in self.widths]

    def factors(self, tables: Sequence[np.ndarray]) -> List[Factor]:
        return [Factor(ts, gs, t) for (ts, gs), t in zip(self.specs, tables)]

    def region(self, tables: Sequence[np.ndarray]):
        joint = compose_joint(FactorizationSpec(self.factors(tables) + self.channel))
        region = numeric_region(self.system, joint, enforce_assumptions=False, clamp_negative=True)
        for w in region.warnings:
            if w.kind == "assumption" and w.value < -self.config.assumption_tol:
                return None
        return region

    def score(self, tables, direction) -> Tuple[float, Optional[Tuple[float, ...]]]:
        region = self.region(tables)
        if region is None or region.is_empty:
            return EXCLUDED, None
        verts = _rate_points(region)
        values = verts @ np.asarray(direction, dtype=float)
        best = int(np.argmax(values))
        return float(values[best]), tuple(float(x) for x in verts[best])

    def dirichlet(self, rng: np.random.Generator) -> List[np.ndarray]:
        """Dirichlet rows, with whole factors made deterministic at rate
        `vertex_mix`.

        Laws with deterministic private auxiliaries satisfy covering
        assumptions that generic Dirichlet draws violate.
        """

        cfg = self.config
        return [
            random_table(rng, r, w, cfg.concentration, cfg.vertex_mix)
            for r, w in zip(self.rows, self.widths)
        ]

    def grid_size(self) -> int:
        size = 1
        for r, grid in zip(self.rows, self.grids):
            size *= len(grid) ** r
        return size

    def grid_point(self, k: int, rng: Optional[np.random.Generator]) -> List[np.ndarray]:
        """The k-th grid member in mixed radix, or a random member."""
        tables = []
        for r, grid in zip(self.rows, self.grids):
            picks = []
            for _ in range(r):
                if rng is None:
                    k, idx = divmod(k, len(grid))
                else:
                    idx = int(rng.integers(len(grid)))
                picks.append(grid[idx])
            tables.append(np.array(picks))
        return tables


def _refine(
    problem: _Problem,
    tables: List[np.ndarray],
    direction: Tuple[float, float],
    passes: int,
) -> Tuple[List[np.ndarray], float]:
    """Coordinate ascent: move one row towards one simplex vertex at a time,
    keeping only improvements."""

    tables = [t.copy() for t in tables]
    best, _ = problem.score(tables, direction)
    for _ in range(passes):
        improved = False
        for fi in range(len(tables)):
            n_rows, width = tables[fi].shape
            if width < 2:
                continue
            for r in range(n_rows):
                for j in range(width):
                    base = tables
                    row = base[fi][r].copy()
                    vertex = np.eye(width)[j]

                    def trial(t):
                        cand = [x.copy() for x in base]
                        moved = (1.0 - t) * row + t * vertex
                        cand[fi][r] = moved / moved.sum()
                        return cand

                    objective = lambda t: -problem.score(trial(t), direction)[0]
                    res = minimize_scalar(
                        objective, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-4}
                    )
                    for t, val in ((float(res.x), -float(res.fun)), (1.0, -objective(1.0))):
                        if val > best + 1e-12:
                            best, tables, improved = val, trial(t), True
                            break
        if not improved:
            break
    return tables, best


def search_envelope(
    region: Union[RegionSpec, RegionId, str],
    channel: FactorizationSpec,
    config: Optional[AuxSearchConfig] = None,
    observations: Optional[Mapping[str, Sequence[str]]] = None,
    params: Optional[Mapping] = None,
    convexify_result: bool = False,
    on_sample: Optional[Callable[[int, int], None]] = None,
) -> RegionEnvelope:
    """Search auxiliary distributions for the envelope of a region.

    Arguments:
        region: RegionSpec, id or name; its template's non-channel factors
            are searched.
        channel: The channel law; input factors of X1 and X2, if present,
            are ignored.
        config: Search settings.
        observations: Output aliases, default from the channel's switch
            variables.
        params: Region parameters for a built-in id.
        convexify_result: Return the time-sharing hull of the envelope.
        on_sample: Optional progress callback receiving (done, total).

    Returns:
        A RegionEnvelope; identical seeds give identical envelopes.

    Raises:
        RegionException: If the region has nothing to search or references
            variables the channel does not define.

    Examples:
       >>> channel = build_noiseless_switch(SwitchChannelParams(0.7, 0.3))
       >>> env = search_envelope("THM1_INNER", channel, AuxSearchConfig(samples=500, seed=1))
       >>> env.support((1, 0))
    """

    spec = _resolve(region, params)
    config = config or AuxSearchConfig()
    if observations is None:
        observations = default_observations(channel)
    problem = _Problem(spec, channel, config, observations)
    start = time.monotonic()

    exhaustive = False
    if config.sampler == "grid":
        size = problem.grid_size()
        exhaustive = size <= config.samples
        total = size if exhaustive else config.samples
    else:
        total = config.samples

    directions = config.directions
    top: Dict[int, List[Tuple[float, int, List[np.ndarray]]]] = {i: [] for i in range(len(directions))}
    excluded = 0
    for k in range(total):
        if config.sampler == "grid":
            tables = problem.grid_point(k, None if exhaustive else derive_rng(config.seed, k))
        else:
            tables = problem.dirichlet(derive_rng(config.seed, k))
        region_k = problem.region(tables)
        if region_k is None:
            excluded += 1
            continue
        verts = _rate_points(region_k)
        if not len(verts):
            continue
        for i, d in enumerate(directions):
            value = float(np.max(verts @ np.asarray(d)))
            bucket = top[i]
            bucket.append((value, k, tables))
            bucket.sort(key=lambda e: (-e[0], e[1]))
            del bucket[config.refine_top :]
        if on_sample is not None:
            on_sample(k + 1, total)

    points: List[EnvelopePoint] = []
    for i, d in enumerate(directions):
        best_val, best_tables = EXCLUDED, None
        for value, k, tables in top[i]:
            if config.refinement_passes:
                tables, value = _refine(problem, tables, d, config.refinement_passes)
            if value > best_val:
                best_val, best_tables = value, tables
        if best_tables is None:
            continue
        _, rates = problem.score(best_tables, d)
        if rates is None:
            continue
        dist = FactorizationSpec(problem.factors(best_tables)).to_json()
        points.append(EnvelopePoint((rates[0], rates[1]), (tuple(d),), dist))

    merged: Dict[Tuple[float, float], EnvelopePoint] = {}
    for p in points:
        key = (round(p.rates[0], 12), round(p.rates[1], 12))
        if key in merged:
            prev = merged[key]
            merged[key] = EnvelopePoint(prev.rates, prev.directions + p.directions, prev.distribution)
        else:
            merged[key] = p
    envelope = RegionEnvelope(
        spec.id, list(merged.values()), RATE_PAIR, excluded, total, False, config
    )
    logger.info(
        "Searched %s: %d samples, %d excluded, %d envelope points in %.1fs",
        spec.id.value,
        total,
        excluded,
        len(envelope),
        time.monotonic() - start,
    )
    return envelope.convexify() if convexify_result else envelope


def convexify(envelope: RegionEnvelope) -> RegionEnvelope:
    """Time-sharing hull of an envelope."""
    return envelope.convexify()
