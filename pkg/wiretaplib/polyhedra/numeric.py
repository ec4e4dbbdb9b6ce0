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

"""This module provides numerical instantiation of inequality systems.

Constants are evaluated on a joint pmf (or an explicit atom valuation) and
the result is intersected with the nonnegative orthant.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..dist_core import JointPmf
from ..info_measures import EntropyAtom, InfoExpr, InfoMeasureException, eval_expr
from ..log import Logs
from .system import IneqSystem, PolyhedraException

__all__ = [
    "AssumptionWarning",
    "NumericRegion",
    "numeric_region",
    "evaluate_constant",
    "extreme_points_2d",
]

logger = Logs().get_logger("polyhedra")

FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class AssumptionWarning:
    """A constraint whose evaluated value breaks the stated convention."""

    tag: str
    expression: str
    value: float
    kind: str = "assumption"

    def __str__(self):
        return f"{self.kind} {self.tag or self.expression} evaluates to {self.value:.6g}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "tag": self.tag,
            "expression": self.expression,
            "value": self.value,
        }


def evaluate_constant(
    expr: InfoExpr,
    joint: Optional[JointPmf] = None,
    valuation: Optional[Mapping[EntropyAtom, float]] = None,
    cache: Optional[Dict[EntropyAtom, float]] = None,
) -> float:
    """Evaluate an information expression on a joint or an atom valuation.

    Raises:
        PolyhedraException: If an atom can not be evaluated.
    """

    if valuation is not None:
        total = float(expr.constant)
        for atom, c in expr.terms.items():
            try:
                total += float(c) * float(valuation[atom])
            except KeyError:
                raise PolyhedraException(f"No value for atom {atom}.")
        return total
    if joint is None:
        if expr.terms:
            raise PolyhedraException(f"Expression {expr} needs a joint pmf.")
        return float(expr.constant)
    try:
        return eval_expr(expr, joint, cache)
    except InfoMeasureException as e:
        raise PolyhedraException(f"Atom out of scope: {e}") from e


def _dedupe(points: Sequence[np.ndarray], tol: float) -> List[np.ndarray]:
    unique: List[np.ndarray] = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol for q in unique):
            unique.append(p)
    return unique


def _ccw(points: List[np.ndarray]) -> List[np.ndarray]:
    """Counterclockwise order about the centroid, starting at the
    lexicographically smallest point."""
    if len(points) <= 1:
        return points
    center = np.mean(points, axis=0)
    ordered = sorted(points, key=lambda p: np.arctan2(p[1] - center[1], p[0] - center[0]))
    start = min(range(len(ordered)), key=lambda i: (ordered[i][0], ordered[i][1]))
    return ordered[start:] + ordered[:start]


def extreme_points_2d(points: Sequence[Sequence[float]], tol: float = FEASIBILITY_TOL) -> List[Tuple[float, float]]:
    """Extreme points of a planar point set, counterclockwise.

    Degenerate sets (a point or a segment) return their one or two extremes.
    """

    pts = _dedupe([np.asarray(p, dtype=float) for p in points], tol)
    if len(pts) >= 3:
        try:
            hull = ConvexHull(np.array(pts))
            pts = [pts[i] for i in hull.vertices]
        except QhullError:
            direction = pts[1] - pts[0]
            for p in pts[2:]:
                if np.linalg.norm(p - pts[0]) > np.linalg.norm(direction):
                    direction = p - pts[0]
            proj = [float(np.dot(p - pts[0], direction)) for p in pts]
            pts = _dedupe([pts[int(np.argmin(proj))], pts[int(np.argmax(proj))]], tol)
    return [tuple(float(x) for x in p) for p in _ccw(pts)]


class NumericRegion:
    """A polyhedron `A x <= b, x >= 0` over named rate variables."""

    def __init__(
        self,
        rate_vars: Sequence[str],
        A: np.ndarray,
        b: np.ndarray,
        tags: Sequence[str] = (),
        empty: bool = False,
        warnings: Sequence[AssumptionWarning] = (),
        tol: float = FEASIBILITY_TOL,
    ):
        self.rate_vars = tuple(rate_vars)
        self.A = np.asarray(A, dtype=float).reshape(-1, len(self.rate_vars))
        self.b = np.asarray(b, dtype=float).reshape(-1)
        self.tags = tuple(tags) or tuple("" for _ in range(len(self.b)))
        self.warnings = tuple(warnings)
        self.tol = tol
        self._forced_empty = empty
        self._vertices: Optional[List[Tuple[float, ...]]] = None

    @property
    def dim(self) -> int:
        return len(self.rate_vars)

    def _full(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.vstack([self.A, -np.eye(self.dim)]),
            np.concatenate([self.b, np.zeros(self.dim)]),
        )

    def contains(self, point: Sequence[float], tol: Optional[float] = None) -> bool:
        if self._forced_empty:
            return False
        tol = self.tol if tol is None else tol
        A, b = self._full()
        return bool(np.all(A @ np.asarray(point, dtype=float) <= b + tol))

    @property
    def vertices(self) -> List[Tuple[float, ...]]:
        """Vertices of the region; counterclockwise for two rate variables."""
        if self._vertices is None:
            self._vertices = self._enumerate()
        return self._vertices

    def _enumerate(self) -> List[Tuple[float, ...]]:
        if self._forced_empty:
            return []
        A, b = self._full()
        found = []
        for rows in itertools.combinations(range(len(b)), self.dim):
            M = A[list(rows)]
            if abs(np.linalg.det(M)) < 1e-12:
                continue
            x = np.linalg.solve(M, b[list(rows)])
            if np.all(A @ x <= b + self.tol):
                found.append(np.where(np.abs(x) < self.tol, 0.0, x))
        found = _dedupe(found, self.tol)
        if self.dim == 2:
            found = _ccw(found)
        else:
            found = sorted(found, key=tuple)
        return [tuple(float(v) for v in p) for p in found]

    @property
    def is_empty(self) -> bool:
        return self._forced_empty or not self.vertices

    def support(self, direction: Sequence[float]) -> Tuple[float, Optional[Tuple[float, ...]]]:
        """Maximize `direction . x` over the region.

        Returns:
            The optimal value and a maximizer, (-inf, None) for an empty
            region and (inf, None) when unbounded.
        """
        if self._forced_empty:
            return float("-inf"), None
        result = linprog(
            -np.asarray(direction, dtype=float),
            A_ub=self.A if len(self.b) else None,
            b_ub=self.b if len(self.b) else None,
            bounds=[(0, None)] * self.dim,
            method="highs",
        )
        if result.status == 2:
            return float("-inf"), None
        if result.status == 3:
            return float("inf"), None
        if result.status != 0:
            raise PolyhedraException(f"Support LP failed: {result.message}")
        return float(-result.fun), tuple(float(v) for v in result.x)

    def max_rate(self, var: str) -> float:
        direction = [1.0 if v == var else 0.0 for v in self.rate_vars]
        return self.support(direction)[0]

    def project(self, keep: Sequence[str]) -> List[Tuple[float, ...]]:
        """Vertices projected onto `keep`, reduced to extreme points in 2-D."""
        idx = [self.rate_vars.index(v) for v in keep]
        pts = [tuple(p[i] for i in idx) for p in self.vertices]
        if len(idx) == 2:
            return extreme_points_2d(pts, self.tol)
        return sorted({tuple(round(x, 12) for x in p) for p in pts})

    def same_as(self, other: "NumericRegion", tol: float = FEASIBILITY_TOL) -> bool:
        """Vertex sets match within `tol` per coordinate."""
        if self.rate_vars != other.rate_vars:
            return False
        mine, theirs = self.vertices, other.vertices
        if len(mine) != len(theirs):
            return False
        return all(
            any(max(abs(a - b) for a, b in zip(p, q)) <= tol for q in theirs) for p in mine
        )

    def to_json(self) -> dict:
        return {
            "rate_vars": list(self.rate_vars),
            "empty": self.is_empty,
            "vertices": [list(p) for p in self.vertices],
            "inequalities": [
                {"tag": t, "coeffs": list(map(float, row)), "rhs": float(rhs)}
                for t, row, rhs in zip(self.tags, self.A, self.b)
            ],
            "warnings": [w.to_json() for w in self.warnings],
        }

    def __repr__(self):
        return f"NumericRegion({', '.join(self.rate_vars)}; {len(self.vertices)} vertices)"


def numeric_region(
    system: IneqSystem,
    joint: Optional[JointPmf] = None,
    valuation: Optional[Mapping[EntropyAtom, float]] = None,
    tol: float = FEASIBILITY_TOL,
    enforce_assumptions: bool = True,
    clamp_negative: bool = False,
    cache: Optional[Dict[EntropyAtom, float]] = None,
) -> NumericRegion:
    """Instantiate `system` numerically.

    Arguments:
        system: Inequality system.
        joint: Joint pmf for evaluating entropy atoms.
        valuation: Explicit atom values, used instead of `joint`.
        tol: Feasibility tolerance.
        enforce_assumptions: Return the empty region when an assumption is
            violated by more than `tol`; otherwise only warn.
        clamp_negative: Replace a negative right-hand side of an inequality
            with only nonnegative coefficients by 0, with a warning.
        cache: Optional entropy cache for `joint`.

    Returns:
        The numeric region over `system.rate_vars`.

    Raises:
        PolyhedraException: If an atom can not be evaluated.

    Examples:
       >>> region = numeric_region(system, joint)
       >>> region.vertices
    """

    if joint is not None and cache is None:
        cache = {}
    warnings: List[AssumptionWarning] = []
    empty = False
    for assumption in system.assumptions:
        value = evaluate_constant(assumption.constant, joint, valuation, cache)
        if value < -tol:
            warnings.append(AssumptionWarning(assumption.tag, str(assumption.constant), value))
            if enforce_assumptions:
                empty = True

    rows, rhs, tags = [], [], []
    for ineq in system.inequalities:
        value = evaluate_constant(ineq.constant, joint, valuation, cache)
        if clamp_negative and value < 0 and all(c > 0 for c in ineq.coeffs.values()):
            if value < -tol:
                warnings.append(
                    AssumptionWarning(ineq.tag, str(ineq.constant), value, kind="clamped")
                )
            value = 0.0
        rows.append([float(ineq.coeff(v)) for v in system.rate_vars])
        rhs.append(value)
        tags.append(ineq.tag)
    for w in warnings:
        logger.debug("%s", w)
    return NumericRegion(
        system.rate_vars,
        np.array(rows, dtype=float).reshape(-1, len(system.rate_vars)),
        np.array(rhs, dtype=float),
        tags,
        empty,
        warnings,
        tol,
    )
