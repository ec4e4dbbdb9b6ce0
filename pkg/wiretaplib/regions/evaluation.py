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

"""This module provides numerical evaluation of regions at a distribution,
derivation of published regions from raw systems, the covering-condition
check and the named reductions to known channels."""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..dist_core import (
    FactorizationTemplate,
    JointPmf,
    compose_joint,
    factorization_residual,
)
from ..info_measures import eval_expr
from ..info_measures import mutual_info_expr as I
from ..log import Logs, log_enter_exit
from ..polyhedra import (
    AssumptionWarning,
    Certificate,
    EliminationStats,
    EqualityVerdict,
    IneqSystem,
    LinIneq,
    NumericRegion,
    RedundancyMode,
    fm_project,
    numeric_region,
    symbolic_equal,
)
from ..utils import derive_rng
from .fixtures import builtin_system, remark_assumption
from .spec import RegionException, RegionId, RegionSpec

__all__ = [
    "RegionEvaluation",
    "evaluate",
    "Derivation",
    "derive_from_raw",
    "screening_joints",
    "thm7_full_count",
    "RemarkCheck",
    "check_remark2",
    "sample_remark2",
    "REDUCTIONS",
    "reduce_system",
    "reduction_template",
    "reference_region",
]

logger = Logs().get_logger("regions")

RESIDUAL_TOL = 1e-9
IMPLICATION_TOL = 1e-6
SCREEN_JOINTS = 24

VarMapping = Mapping[str, Sequence[str]]


def _resolve(region: Union[RegionSpec, RegionId, str], params: Optional[Mapping] = None) -> RegionSpec:
    if isinstance(region, RegionSpec):
        return region
    return builtin_system(region, **dict(params or {}))


@dataclass
class RegionEvaluation:
    """A region instantiated at one distribution."""

    region_id: RegionId
    region: NumericRegion
    residual: float
    mapping: Dict[str, Tuple[str, ...]] = field(default_factory=dict)

    @property
    def warnings(self) -> Tuple[AssumptionWarning, ...]:
        return self.region.warnings

    @property
    def flagged(self) -> bool:
        return bool(self.region.warnings)

    def to_json(self) -> dict:
        out = self.region.to_json()
        out.update(
            {
                "region": self.region_id.value,
                "residual": self.residual,
                "mapping": {k: list(v) for k, v in sorted(self.mapping.items())},
                "flagged": self.flagged,
            }
        )
        return out


def evaluate(
    region: Union[RegionSpec, RegionId, str],
    joint: JointPmf,
    observations: Optional[VarMapping] = None,
    substitution: Optional[VarMapping] = None,
    params: Optional[Mapping] = None,
    tol: float = 1e-9,
    residual_tol: float = RESIDUAL_TOL,
    enforce_assumptions: bool = False,
    clamp_negative: bool = True,
) -> RegionEvaluation:
    """Evaluate a region at one joint distribution.

    Channel outputs can be aliased to what the receivers observe (for
    switch channels, the output together with its switch state) through
    `observations`; auxiliaries can be fixed through `substitution`, e.g.
    `{"U0": ("X1",)}`. A Q absent from the joint is treated as constant.

    Arguments:
        region: RegionSpec, id or name.
        joint: Joint pmf over the template variables.
        observations: Output aliases, applied to the inequalities only.
        substitution: Auxiliary substitution, applied to the inequalities
            and the factorization template.
        params: Region parameters for a built-in id.
        tol: Feasibility tolerance.
        residual_tol: Largest factorization residual accepted.
        enforce_assumptions: Empty the region on a violated assumption.
        clamp_negative: Clamp negative bounds to 0 with a warning.

    Returns:
        A RegionEvaluation; violated assumptions are flagged, not fatal.

    Raises:
        RegionException: If the joint lacks a variable or does not belong
            to the factorization family.

    Examples:
       >>> ev = evaluate("THM5_NOISELESS_SWITCH", joint)
       >>> ev.region.max_rate("R1")
    """

    spec = _resolve(region, params)
    substitution = {k: tuple(v) for k, v in (substitution or {}).items()}
    if "Q" in spec.template.variables and "Q" not in joint and "Q" not in substitution:
        substitution["Q"] = ()
    mapping = dict(substitution)
    mapping.update({k: tuple(v) for k, v in (observations or {}).items()})

    system = spec.system.substitute(mapping) if mapping else spec.system
    missing = sorted(system.random_variables() - set(joint.names))
    if missing:
        raise RegionException(f"{spec.id.value}: joint lacks variables {missing}.")

    template = spec.template.substitute(substitution) if substitution else spec.template
    absent = [v for v in template.variables if v not in joint]
    if absent:
        raise RegionException(f"{spec.id.value}: joint lacks template variables {absent}.")
    residual = factorization_residual(joint, template)
    if residual > residual_tol:
        raise RegionException(
            "{}: joint does not factor as {} (residual {:.3g}).".format(
                spec.id.value, template, residual
            )
        )

    numeric = numeric_region(
        system,
        joint,
        tol=tol,
        enforce_assumptions=enforce_assumptions,
        clamp_negative=clamp_negative,
    )
    for w in numeric.warnings:
        logger.warning("%s: %s", spec.id.value, w)
    return RegionEvaluation(spec.id, numeric, residual, mapping)


@dataclass
class Derivation:
    """Outcome of eliminating the auxiliary rates of a raw system."""

    region_id: RegionId
    system: IneqSystem
    stats: List[EliminationStats]
    verdict: Optional[EqualityVerdict] = None
    published: Optional[RegionId] = None

    @property
    def count(self) -> int:
        return len(self.system.inequalities)

    def to_json(self) -> dict:
        return {
            "region": self.region_id.value,
            "published": self.published.value if self.published else None,
            "count": self.count,
            "steps": [str(s) for s in self.stats],
            "system": self.system.to_json(),
            "verdict": self.verdict.to_json() if self.verdict else None,
        }


def screening_joints(
    template: FactorizationTemplate, count: int = SCREEN_JOINTS, seed: int = 0
) -> List[JointPmf]:
    """Random binary members of `template`, each factor deterministic with
    probability one half, for numeric screening of redundancy candidates."""

    cards = {v: 2 for v in template.variables}
    return [
        compose_joint(template.sample(cards, derive_rng(seed, k), vertex_mix=0.5))
        for k in range(count)
    ]


@log_enter_exit(logger)
def derive_from_raw(
    region: Union[RegionSpec, RegionId, str],
    eliminate: Optional[Sequence[str]] = None,
    mode: RedundancyMode = RedundancyMode.FARKAS_SHANNON,
    compare: bool = True,
    audit: Optional[List[Certificate]] = None,
    screen: int = SCREEN_JOINTS,
) -> Derivation:
    """Project a raw system onto its message rates and compare the result
    with the published region.

    Arguments:
        region: Raw RegionSpec, id or name.
        eliminate: Elimination order, default the region's auxiliary rates.
        mode: Redundancy mode used during elimination and comparison.
        compare: Run the symbolic comparison with the published region.
        audit: Optional list receiving redundancy certificates.
        screen: Number of template members used to skip redundancy
            candidates that are numerically necessary; 0 disables it. The
            result does not depend on it.

    Returns:
        A Derivation with the projected system and per-step statistics.

    Raises:
        RegionException: If the region has nothing to eliminate.
    """

    spec = _resolve(region)
    order = tuple(eliminate) if eliminate is not None else spec.eliminate
    if not order:
        raise RegionException(f"{spec.id.value} has no auxiliary rates to eliminate.")
    mode = RedundancyMode.parse(mode)
    screens = screening_joints(spec.template, screen) if screen else []
    system, stats = fm_project(spec.system, order, mode, audit, screens=screens)
    system = system.replace(name=f"{spec.id.value}.derived")
    logger.info(
        "Derived %s: %d inequalities, %d assumptions",
        spec.id.value,
        len(system.inequalities),
        len(system.assumptions),
    )
    verdict = None
    if compare and spec.published is not None:
        published = builtin_system(spec.published).system
        if set(published.rate_vars) == set(system.rate_vars):
            verdict = symbolic_equal(system, published, mode, screens)
    return Derivation(spec.id, system, stats, verdict, spec.published)


def thm7_full_count(mode: RedundancyMode = RedundancyMode.FARKAS_SHANNON) -> int:
    """Number of inequalities left after projecting the full strong-secrecy
    system onto (R1, R2)."""

    return derive_from_raw(RegionId.THM7_STRONG_RAW, mode=mode, compare=False).count


@dataclass(frozen=True)
class RemarkCheck:
    """Both sides of the covering condition and the conditional mutual
    information it controls."""

    lhs: float
    rhs: float
    conditional_mi: float
    tol: float = 1e-9

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tol

    @property
    def implication_holds(self) -> bool:
        """The condition holding forces the conditional MI to vanish."""
        return not self.holds or self.conditional_mi < IMPLICATION_TOL

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "conditional_mi": self.conditional_mi,
            "holds": self.holds,
            "implication_holds": self.implication_holds,
        }


def check_remark2(joint: JointPmf, tol: float = 1e-9) -> RemarkCheck:
    """Evaluate the covering condition and I(U1,V1;U2,V2|Q,U0,V0,Z).

    Arguments:
        joint: Joint over U0, U1, U2, V0, V1, V2, Z and optionally Q.
        tol: Tolerance of the condition.

    Returns:
        A RemarkCheck.

    Raises:
        RegionException: If a variable is missing.
    """

    needed = {"U0", "U1", "U2", "V0", "V1", "V2", "Z"}
    missing = sorted(needed - set(joint.names))
    if missing:
        raise RegionException(f"Covering check needs variables {missing}.")
    cache: Dict = {}
    lhs = eval_expr(I("U1,U2,V1,V2", "Z", "U0,V0"), joint, cache)
    slack_expr = remark_assumption().constant
    rhs = lhs + eval_expr(slack_expr, joint, cache)
    cond = "Q,U0,V0,Z" if "Q" in joint else "U0,V0,Z"
    cmi = eval_expr(I("U1,V1", "U2,V2", cond), joint, cache)
    return RemarkCheck(lhs, rhs, cmi, tol)


REMARK_TEMPLATE = FactorizationTemplate.parse(
    ["Q", "U0|Q", "U1,U2|U0", "V0|Q", "V1,V2|V0", "X1|U0,U1,U2", "X2|V0,V1,V2", "Z|X1,X2"]
)


def sample_remark2(
    samples: int = 1000,
    seed: int = 0,
    cardinality: int = 2,
    tol: float = 1e-9,
) -> List[RemarkCheck]:
    """Check the covering condition on random members of the weak-secrecy
    family, with a random eavesdropper channel."""

    cards = {v: cardinality for v in REMARK_TEMPLATE.variables}
    cards["Q"] = 1
    checks = []
    for k in range(samples):
        spec = REMARK_TEMPLATE.sample(cards, derive_rng(seed, k))
        checks.append(check_remark2(compose_joint(spec), tol))
    held = sum(c.holds for c in checks)
    logger.info("Covering condition held on %d of %d samples", held, samples)
    return checks


_U = ("U0", "U1", "U2")
_V = ("V0", "V1", "V2")

REDUCTIONS: Dict[str, Dict[str, Tuple[str, ...]]] = {
    "compound_mac": {"Z": (), **{u: ("X1",) for u in _U}, **{v: ("X2",) for v in _V}},
    "mac_wiretap": {"Y2": ("Y1",), **{u: ("X1",) for u in _U}, **{v: ("X2",) for v in _V}},
    "broadcast_confidential": {
        "X2": (),
        "Y2": ("Y1",),
        "U1": ("U0",),
        "U2": ("U0",),
        **{v: () for v in _V},
    },
}


def _reduction(name: str) -> Dict[str, Tuple[str, ...]]:
    try:
        return REDUCTIONS[name]
    except KeyError:
        raise RegionException(
            f"Unknown reduction {name!r}, expected one of {', '.join(REDUCTIONS)}."
        )


def reduce_system(system: IneqSystem, reduction: Union[str, VarMapping]) -> IneqSystem:
    """Substitute variables in every atom of `system`.

    Arguments:
        system: Inequality system.
        reduction: A name from REDUCTIONS or an explicit mapping; an empty
            tuple makes a variable constant.

    Returns:
        The reduced system.
    """

    if isinstance(reduction, str):
        name, mapping = reduction, _reduction(reduction)
    else:
        name, mapping = "custom", reduction
    return system.substitute(mapping, name=f"{system.name}.{name}")


def reduction_template(region: Union[RegionSpec, RegionId, str], reduction: str) -> FactorizationTemplate:
    """The family of distributions the reduced region ranges over."""
    return _resolve(region).template.substitute(_reduction(reduction))


def _le(tag: str, coeffs: Mapping[str, int], rhs) -> LinIneq:
    return LinIneq.le(coeffs, rhs, tag)


def reference_region(reduction: str) -> IneqSystem:
    """The known region each reduction should reproduce.

    compound_mac: the compound multiple access channel capacity region.
    mac_wiretap: the multiple access wiretap region with independent inputs.
    broadcast_confidential: the broadcast channel with one confidential
    message.
    """

    r1, r2, both = {"R1": 1}, {"R2": 1}, {"R1": 1, "R2": 1}
    if reduction == "compound_mac":
        ineqs = []
        for j in (1, 2):
            y = f"Y{j}"
            ineqs += [
                _le(f"r1.rx{j}", r1, I("X1", y, "Q,X2")),
                _le(f"r2.rx{j}", r2, I("X2", y, "Q,X1")),
                _le(f"sum.rx{j}", both, I("X1,X2", y, "Q")),
            ]
    elif reduction == "mac_wiretap":
        ineqs = [
            _le("r1", r1, I("X1", "Y1", "Q,X2") - I("X1", "Z", "Q")),
            _le("r2", r2, I("X2", "Y1", "Q,X1") - I("X2", "Z", "Q")),
            _le("sum", both, I("X1,X2", "Y1", "Q") - I("X1,X2", "Z", "Q")),
        ]
    elif reduction == "broadcast_confidential":
        ineqs = [
            _le("r1", r1, I("U0", "Y1", "Q") - I("U0", "Z", "Q")),
            _le("r2", r2, 0),
        ]
    else:
        _reduction(reduction)
        raise RegionException(f"No reference region for {reduction!r}.")
    return IneqSystem(["R1", "R2"], ineqs, name=f"reference.{reduction}")
