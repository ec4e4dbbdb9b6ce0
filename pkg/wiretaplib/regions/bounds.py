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

"""This module provides containment checks between an inner and an outer
envelope."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from ..log import Logs
from .spec import RegionEnvelope, RegionException

__all__ = ["ContainmentReport", "compare_bounds", "containment_violation"]

logger = Logs().get_logger("regions")

CONTAINMENT_TOL = 1e-9


def _fan(count: int) -> List[Tuple[float, float]]:
    angles = np.linspace(0.0, np.pi / 2, count)
    return [(float(np.cos(a)), float(np.sin(a))) for a in angles]


def containment_violation(point: Sequence[float], outer: np.ndarray) -> float:
    """Smallest t >= 0 with point - t(1, 1) in the down-closure of the hull
    of `outer`."""

    m = outer.shape[0]
    if m == 0:
        return float("inf")
    # variables: weights w (m), then t; minimize t
    c = np.zeros(m + 1)
    c[-1] = 1.0
    # point_i - t <= sum_k w_k outer_k,i  ->  -outer^T w - t <= -point
    A_ub = np.hstack([-outer.T, -np.ones((outer.shape[1], 1))])
    b_ub = -np.asarray(point, dtype=float)
    A_eq = np.hstack([np.ones((1, m)), np.zeros((1, 1))])
    result = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * (m + 1),
        method="highs",
    )
    if result.status != 0:
        raise RegionException(f"Containment LP failed: {result.message}")
    return float(result.fun)


@dataclass
class ContainmentReport:
    """Containment of an inner envelope in an outer one.

    `violations` pairs every inner point with its distance outside the
    outer region; `gaps` pairs every direction with the difference of
    support values, outer minus inner.
    """

    inner: str
    outer: str
    violations: List[Tuple[Tuple[float, float], float]] = field(default_factory=list)
    gaps: List[Tuple[Tuple[float, float], float]] = field(default_factory=list)
    tol: float = CONTAINMENT_TOL

    @property
    def max_violation(self) -> float:
        return max((v for _, v in self.violations), default=0.0)

    @property
    def contained(self) -> bool:
        return self.max_violation <= self.tol

    @property
    def worst_point(self) -> Optional[Tuple[float, float]]:
        if not self.violations:
            return None
        return max(self.violations, key=lambda e: e[1])[0]

    def to_json(self) -> dict:
        return {
            "inner": self.inner,
            "outer": self.outer,
            "contained": self.contained,
            "max_violation": self.max_violation,
            "violations": [{"point": list(p), "violation": v} for p, v in self.violations],
            "gaps": [{"direction": list(d), "gap": g} for d, g in self.gaps],
        }


def compare_bounds(
    inner: RegionEnvelope,
    outer: RegionEnvelope,
    directions: Optional[Sequence[Tuple[float, float]]] = None,
    tol: float = CONTAINMENT_TOL,
) -> ContainmentReport:
    """Check that every inner point lies in the outer region and report the
    gap profile.

    The outer region is the down-closure of the convex hull of the outer
    points, so an outer envelope should come from a capacity region or be
    convexified.

    Arguments:
        inner: Envelope of the inner bound.
        outer: Envelope of the outer bound or capacity region.
        directions: Gap directions, default 9 evenly spaced angles.
        tol: Containment tolerance.

    Returns:
        A ContainmentReport.

    Raises:
        RegionException: If the outer envelope is empty.

    Examples:
       >>> report = compare_bounds(inner_env, capacity_env)
       >>> report.contained, report.max_violation
    """

    if not outer.points:
        raise RegionException("Outer envelope has no points.")
    outer_pts = outer.rates()
    report = ContainmentReport(inner.region.value, outer.region.value, tol=tol)
    for p in inner.points:
        report.violations.append((p.rates, containment_violation(p.rates, outer_pts)))
    for d in directions or _fan(9):
        d = (float(d[0]), float(d[1]))
        inner_val = inner.support(d) if inner.points else 0.0
        report.gaps.append((d, outer.support(d) - inner_val))
    if not report.contained:
        logger.warning(
            "%s is not contained in %s: violation %.3g at %s",
            report.inner,
            report.outer,
            report.max_violation,
            report.worst_point,
        )
    return report
