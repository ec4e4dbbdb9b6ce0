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

"""This module provides finite probability distributions, conditional
factors, factorization composition and the switch channel constructions.

All objects are immutable after construction. A JointPmf always keeps its
variables sorted by name, so joints built along different paths compare
entry by entry.
"""

from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .log import Logs
from .utils import as_fraction

__all__ = [
    "DistributionException",
    "UndefinedConditionalException",
    "VariableSpec",
    "JointPmf",
    "Factor",
    "FactorShape",
    "FactorizationSpec",
    "FactorizationTemplate",
    "random_table",
    "SwitchChannelParams",
    "compose_joint",
    "marginalize",
    "factorization_residual",
    "build_degraded_switch",
    "build_noiseless_switch",
    "DEGRADED_SWITCH_OBSERVATIONS",
    "NOISELESS_SWITCH_OBSERVATIONS",
]

logger = Logs().get_logger("dist_core")

NORMALIZATION_TOL = 1e-12
CONDITIONING_TOL = 1e-12

# Receivers of a switch channel observe their output together with the
# switch state.
DEGRADED_SWITCH_OBSERVATIONS = {
    "Y1": ("Y1", "S"),
    "Y2": ("Y2", "S"),
    "Z": ("Z", "S"),
}
NOISELESS_SWITCH_OBSERVATIONS = {
    "Y1": ("Y1", "S1"),
    "Y2": ("Y2", "S1"),
    "Z": ("Z", "S2"),
}


class DistributionException(Exception):
    """Exception raised by distribution construction and composition."""

    pass


class UndefinedConditionalException(DistributionException):
    """Exception raised when conditioning on a zero-probability event."""

    pass


@dataclass(frozen=True, order=True)
class VariableSpec:
    """A named finite random variable."""

    name: str
    cardinality: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise DistributionException(f"Invalid variable name: {self.name!r}.")
        if int(self.cardinality) != self.cardinality or self.cardinality < 1:
            raise DistributionException(
                f"Variable {self.name} has invalid cardinality {self.cardinality}."
            )

    def to_json(self) -> dict:
        return {"name": self.name, "cardinality": int(self.cardinality)}

    @classmethod
    def from_json(cls, obj: Union[str, dict]) -> "VariableSpec":
        """Read "name:card" or {"name": ..., "cardinality": ...}."""
        if isinstance(obj, str):
            name, sep, card = obj.partition(":")
            if not sep:
                raise DistributionException(
                    f"Variable {obj!r} must be written as name:cardinality."
                )
            try:
                return cls(name.strip(), int(card))
            except ValueError:
                raise DistributionException(f"Invalid cardinality in {obj!r}.")
        try:
            return cls(str(obj["name"]), int(obj["cardinality"]))
        except (KeyError, TypeError, ValueError):
            raise DistributionException(f"Invalid variable declaration {obj!r}.")


def _check_unique(variables: Sequence[VariableSpec]):
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise DistributionException(f"Duplicate variable names in {names}.")


def _read_probs(values) -> np.ndarray:
    try:
        return np.asarray(
            [float(as_fraction(v)) if isinstance(v, str) else float(v) for v in values],
            dtype=np.float64,
        )
    except (TypeError, ValueError) as e:
        raise DistributionException(f"Invalid probability table: {e}.")


class JointPmf:
    """A labeled probability tensor over finite variables.

    Examples:
       >>> joint = JointPmf([VariableSpec("X", 2)], [0.5, 0.5])
       >>> joint.names
       ('X',)
    """

    def __init__(self, variables: Sequence[VariableSpec], probs, tol: float = NORMALIZATION_TOL):
        """Initializes JointPmf.

        Arguments:
            variables: Variables in the axis order of `probs`.
            probs: Flat row-major table or tensor over the product space.
            tol: Normalization tolerance.

        Raises:
            DistributionException: If the table is not a valid pmf.
        """
        variables = tuple(variables)
        _check_unique(variables)
        shape = tuple(v.cardinality for v in variables)
        table = np.asarray(probs, dtype=np.float64)
        if table.size != int(np.prod(shape, dtype=np.int64)):
            raise DistributionException(
                f"Table of size {table.size} does not match shape {shape}."
            )
        table = table.reshape(shape)
        if not np.all(np.isfinite(table)) or np.any(table < 0):
            raise DistributionException("Probabilities must be finite and nonnegative.")
        total = table.sum()
        if abs(total - 1.0) > tol:
            raise DistributionException(f"Probabilities sum to {total!r}, not 1.")

        order = sorted(range(len(variables)), key=lambda i: variables[i].name)
        self._variables = tuple(variables[i] for i in order)
        self._tensor = np.ascontiguousarray(np.transpose(table, order))
        self._tensor.setflags(write=False)
        self._axes = {v.name: i for i, v in enumerate(self._variables)}

    @property
    def variables(self) -> Tuple[VariableSpec, ...]:
        return self._variables

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self._variables)

    @property
    def tensor(self) -> np.ndarray:
        return self._tensor

    @property
    def probs(self) -> np.ndarray:
        return self._tensor.reshape(-1)

    def cardinality(self, name: str) -> int:
        return self._variables[self.axis(name)].cardinality

    def axis(self, name: str) -> int:
        try:
            return self._axes[name]
        except KeyError:
            raise DistributionException(
                f"Unknown variable {name!r}, joint has {list(self.names)}."
            )

    def __contains__(self, name: str) -> bool:
        return name in self._axes

    def marginal_tensor(self, names: Sequence[str]) -> np.ndarray:
        """Marginal table with axes in the order of `names`."""
        axes = [self.axis(n) for n in names]
        if len(set(axes)) != len(axes):
            raise DistributionException(f"Repeated variable in {list(names)}.")
        dropped = tuple(i for i in range(len(self._variables)) if i not in axes)
        table = self._tensor.sum(axis=dropped) if dropped else self._tensor
        kept = sorted(axes)
        return np.transpose(table, [kept.index(a) for a in axes])

    def conditional(
        self,
        targets: Sequence[str],
        givens: Sequence[str] = (),
        undefined: str = "raise",
    ) -> "Factor":
        """Derive p(targets | givens).

        Arguments:
            targets: Target variable names.
            givens: Conditioning variable names.
            undefined: "raise" to reject zero-probability conditioning events,
                "uniform" to fill those rows with the uniform law.

        Returns:
            A Factor with table axes givens then targets.

        Raises:
            UndefinedConditionalException: If a conditioning event has
                probability at most 1e-12 and `undefined` is "raise".
        """
        targets, givens = tuple(targets), tuple(givens)
        table = self.marginal_tensor(givens + targets)
        target_axes = tuple(range(len(givens), len(givens) + len(targets)))
        norm = table.sum(axis=target_axes, keepdims=True)
        zero = norm <= CONDITIONING_TOL
        if np.any(zero) and undefined == "raise":
            raise UndefinedConditionalException(
                "p({}|{}) is undefined on a zero-probability event.".format(
                    ",".join(targets), ",".join(givens)
                )
            )
        n_targets = int(np.prod([self.cardinality(t) for t in targets]))
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = np.where(zero, 1.0 / n_targets, table / np.where(zero, 1.0, norm))
        return Factor(
            [self._variables[self.axis(t)] for t in targets],
            [self._variables[self.axis(g)] for g in givens],
            cond,
        )

    def allclose(self, other: "JointPmf", atol: float = 1e-12) -> bool:
        return self._variables == other._variables and np.allclose(
            self._tensor, other._tensor, rtol=0.0, atol=atol
        )

    def to_json(self) -> dict:
        return {
            "variables": [v.to_json() for v in self._variables],
            "probs": [float(p) for p in self.probs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "JointPmf":
        try:
            variables = [VariableSpec.from_json(v) for v in obj["variables"]]
            return cls(variables, _read_probs(obj["probs"]))
        except KeyError as e:
            raise DistributionException(f"Joint pmf is missing key {e}.")

    @classmethod
    def point_mass(cls, variables: Sequence[VariableSpec], index: Sequence[int]) -> "JointPmf":
        shape = tuple(v.cardinality for v in variables)
        table = np.zeros(shape)
        table[tuple(index)] = 1.0
        return cls(variables, table)

    def __repr__(self):
        scope = ", ".join(f"{v.name}:{v.cardinality}" for v in self._variables)
        return f"JointPmf({scope})"


class Factor:
    """A conditional law p(targets | givens).

    The table has one axis per given variable followed by one axis per
    target variable.
    """

    def __init__(
        self,
        targets: Sequence[VariableSpec],
        givens: Sequence[VariableSpec],
        table,
        tol: float = NORMALIZATION_TOL,
    ):
        self.targets = tuple(targets)
        self.givens = tuple(givens)
        if not self.targets:
            raise DistributionException("A factor needs at least one target.")
        _check_unique(self.targets + self.givens)
        shape = tuple(v.cardinality for v in self.givens + self.targets)
        table = np.asarray(table, dtype=np.float64)
        if table.size != int(np.prod(shape, dtype=np.int64)):
            raise DistributionException(
                "Factor p({}|{}) table of size {} does not match shape {}.".format(
                    ",".join(self.target_names),
                    ",".join(self.given_names),
                    table.size,
                    shape,
                )
            )
        table = table.reshape(shape)
        if not np.all(np.isfinite(table)) or np.any(table < 0):
            raise DistributionException("Factor entries must be finite and nonnegative.")
        sums = table.reshape(
            int(np.prod([v.cardinality for v in self.givens], dtype=np.int64)), -1
        ).sum(axis=1)
        worst = np.max(np.abs(sums - 1.0))
        if worst > tol:
            raise DistributionException(
                "Factor p({}|{}) is not normalized (deviation {:.3g}).".format(
                    ",".join(self.target_names), ",".join(self.given_names), worst
                )
            )
        self.table = table
        self.table.setflags(write=False)

    @property
    def target_names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.targets)

    @property
    def given_names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.givens)

    @property
    def shape(self) -> "FactorShape":
        return FactorShape(self.target_names, self.given_names)

    @classmethod
    def uniform(cls, targets: Sequence[VariableSpec], givens: Sequence[VariableSpec] = ()) -> "Factor":
        shape = tuple(v.cardinality for v in tuple(givens) + tuple(targets))
        n = int(np.prod([v.cardinality for v in targets]))
        return cls(targets, givens, np.full(shape, 1.0 / n))

    @classmethod
    def deterministic(
        cls,
        targets: Sequence[VariableSpec],
        givens: Sequence[VariableSpec],
        fn: Callable[..., Union[int, Tuple[int, ...]]],
    ) -> "Factor":
        """Build an indicator factor 1{targets = fn(*givens)}."""
        targets, givens = tuple(targets), tuple(givens)
        table = np.zeros(tuple(v.cardinality for v in givens + targets))
        for idx in np.ndindex(*(v.cardinality for v in givens)):
            out = fn(*idx)
            out = out if isinstance(out, tuple) else (out,)
            table[idx + tuple(out)] = 1.0
        return cls(targets, givens, table)

    def to_json(self) -> dict:
        return {
            "targets": [f"{v.name}:{v.cardinality}" for v in self.targets],
            "givens": [f"{v.name}:{v.cardinality}" for v in self.givens],
            "table": [float(p) for p in self.table.reshape(-1)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Factor":
        try:
            targets = [VariableSpec.from_json(v) for v in obj["targets"]]
            givens = [VariableSpec.from_json(v) for v in obj.get("givens", [])]
            return cls(targets, givens, _read_probs(obj["table"]))
        except KeyError as e:
            raise DistributionException(f"Factor is missing key {e}.")

    def __repr__(self):
        return "Factor(p({}|{}))".format(
            ",".join(self.target_names), ",".join(self.given_names)
        )


@dataclass(frozen=True)
class FactorShape:
    """Targets and givens of a factor, without its table."""

    targets: Tuple[str, ...]
    givens: Tuple[str, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "FactorShape":
        """Read "U1,U2|U0" style shapes."""
        targets, _, givens = text.partition("|")
        split = lambda s: tuple(x.strip() for x in s.split(",") if x.strip())
        return cls(split(targets), split(givens))

    def __str__(self):
        if self.givens:
            return "{}|{}".format(",".join(self.targets), ",".join(self.givens))
        return ",".join(self.targets)


def _check_order(shapes: Sequence[FactorShape]):
    seen = set()
    for shape in shapes:
        missing = [g for g in shape.givens if g not in seen]
        if missing:
            raise DistributionException(
                f"Factor {shape} conditions on {missing} before they are defined."
            )
        dup = [t for t in shape.targets if t in seen]
        if dup:
            raise DistributionException(f"Variables {dup} are targets of two factors.")
        seen.update(shape.targets)


class FactorizationSpec:
    """An ordered list of factors whose product is a joint pmf.

    Every variable is the target of exactly one factor, and each factor only
    conditions on targets of earlier factors.
    """

    def __init__(self, factors: Iterable[Factor]):
        self.factors = tuple(factors)
        self.validate()

    def validate(self):
        _check_order([f.shape for f in self.factors])
        cards: Dict[str, int] = {}
        for f in self.factors:
            for v in f.targets + f.givens:
                if cards.setdefault(v.name, v.cardinality) != v.cardinality:
                    raise DistributionException(
                        f"Variable {v.name} has conflicting cardinalities."
                    )

    @property
    def variables(self) -> List[VariableSpec]:
        return [v for f in self.factors for v in f.targets]

    @property
    def template(self) -> "FactorizationTemplate":
        return FactorizationTemplate([f.shape for f in self.factors])

    def factor_for(self, name: str) -> Factor:
        for f in self.factors:
            if name in f.target_names:
                return f
        raise DistributionException(f"No factor defines {name}.")

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, obj: dict) -> "FactorizationSpec":
        try:
            return cls(Factor.from_json(f) for f in obj["factors"])
        except (KeyError, TypeError):
            raise DistributionException("Factorization must be {'factors': [...]}.")


def random_table(
    rng: np.random.Generator,
    rows: int,
    width: int,
    concentration: float = 1.0,
    vertex_mix: float = 0.0,
) -> np.ndarray:
    """A `rows` x `width` stochastic table: Dirichlet rows, or with
    probability `vertex_mix` one simplex vertex per row."""

    if vertex_mix > 0 and rng.random() < vertex_mix:
        return np.eye(width)[rng.integers(width, size=rows)]
    return rng.dirichlet(np.full(width, concentration), size=rows)


class FactorizationTemplate:
    """The shape of a factorization family, such as p(q)p(u0|q)p(u1,u2|u0).

    Examples:
       >>> t = FactorizationTemplate.parse(["Q", "U0|Q", "U1,U2|U0"])
       >>> t.variables
       ('Q', 'U0', 'U1', 'U2')
    """

    def __init__(self, shapes: Iterable[FactorShape]):
        self.shapes = tuple(shapes)
        _check_order(self.shapes)

    @classmethod
    def parse(cls, texts: Iterable[str]) -> "FactorizationTemplate":
        return cls(FactorShape.parse(t) for t in texts)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(t for s in self.shapes for t in s.targets)

    def __iter__(self):
        return iter(self.shapes)

    def __str__(self):
        return "".join(f"p({s})" for s in self.shapes)

    def substitute(self, mapping: Mapping[str, Sequence[str]]) -> "FactorizationTemplate":
        """Collapse the template under a variable substitution.

        Substituted names that are already defined are dropped from targets,
        targets are dropped from their own givens, and shapes left without
        targets disappear. `{"U0": ("X1",), "Q": ()}` turns
        p(q)p(u0|q)p(x1|u0) into p(x1).
        """

        def expand(names):
            out: List[str] = []
            for n in names:
                for m in mapping.get(n, (n,)):
                    if m not in out:
                        out.append(m)
            return out

        seen: set = set()
        shapes = []
        for s in self.shapes:
            targets = [t for t in expand(s.targets) if t not in seen]
            if not targets:
                continue
            givens = [g for g in expand(s.givens) if g not in targets]
            shapes.append(FactorShape(tuple(targets), tuple(givens)))
            seen.update(targets)
        return FactorizationTemplate(shapes)

    def sample(
        self,
        cardinalities: Mapping[str, int],
        rng: np.random.Generator,
        concentration: float = 1.0,
        vertex_mix: float = 0.0,
    ) -> FactorizationSpec:
        """Draw one member of the family, conditional rows Dirichlet or, for a
        whole factor with probability `vertex_mix`, simplex vertices.

        Arguments:
            cardinalities: Alphabet size per template variable.
            rng: Random generator.
            concentration: Dirichlet parameter, 1.0 is uniform on the simplex.
            vertex_mix: Probability of a deterministic factor.

        Returns:
            A factorization with the template's shapes.

        Raises:
            DistributionException: If a cardinality is missing.
        """

        missing = [v for v in self.variables if v not in cardinalities]
        if missing:
            raise DistributionException(f"No cardinality for {missing}.")
        spec = lambda n: VariableSpec(n, int(cardinalities[n]))
        factors = []
        for s in self.shapes:
            targets = [spec(t) for t in s.targets]
            givens = [spec(g) for g in s.givens]
            rows = int(np.prod([g.cardinality for g in givens], dtype=np.int64))
            width = int(np.prod([t.cardinality for t in targets], dtype=np.int64))
            table = random_table(rng, rows, width, concentration, vertex_mix)
            factors.append(Factor(targets, givens, table))
        return FactorizationSpec(factors)


def compose_joint(spec: FactorizationSpec) -> JointPmf:
    """Multiply the factors of `spec` into a joint pmf.

    Arguments:
        spec: Valid factorization.

    Returns:
        The product pmf with variables in canonical order.

    Raises:
        DistributionException: If the factor order is not topological.
    """

    spec.validate()
    scope: List[VariableSpec] = []
    index: Dict[str, int] = {}
    tensor = np.ones(())
    for f in spec.factors:
        new = list(range(len(scope), len(scope) + len(f.targets)))
        tensor = np.einsum(
            tensor,
            list(range(len(scope))),
            f.table,
            [index[g] for g in f.given_names] + new,
            list(range(len(scope) + len(new))),
        )
        for v in f.targets:
            index[v.name] = len(scope)
            scope.append(v)
    total = tensor.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise DistributionException(f"Composed joint sums to {total!r}.")
    return JointPmf(scope, tensor / total)


def marginalize(joint: JointPmf, keep: Iterable[str]) -> JointPmf:
    """Sum out every variable not in `keep`.

    Arguments:
        joint: Joint pmf.
        keep: Names to keep.

    Returns:
        Marginal pmf over `keep`.

    Raises:
        DistributionException: If a name is not in the joint.
    """

    keep = list(dict.fromkeys(keep))
    table = joint.marginal_tensor(keep)
    return JointPmf([joint.variables[joint.axis(n)] for n in keep], table)


def factorization_residual(joint: JointPmf, template: FactorizationTemplate) -> float:
    """Largest entrywise gap between `joint` and the product of its own
    conditionals along `template`.

    Zero exactly when the joint belongs to the family described by the
    template. Variables of the joint outside the template are ignored.
    """

    names = template.variables
    base = marginalize(joint, names)
    factors = [
        base.conditional(s.targets, s.givens, undefined="uniform") for s in template
    ]
    rebuilt = compose_joint(FactorizationSpec(factors))
    return float(np.max(np.abs(rebuilt.tensor - base.tensor)))


@dataclass(frozen=True)
class SwitchChannelParams:
    """Switch probabilities and branch laws of a switch channel.

    State value 0 connects Transmitter 1 and has probability `tau1`.
    `tau2` is the eavesdropper's switch probability for the noiseless switch.
    `branches` holds 2-D row-stochastic matrices keyed "y1|x1", "y1|x2",
    "y2|y1" and "z|y2"; missing branches are noiseless.
    """

    tau1: float
    tau2: Optional[float] = None
    branches: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("tau1", "tau2"):
            tau = getattr(self, name)
            if tau is not None and not 0.0 <= float(tau) <= 1.0:
                raise DistributionException(f"{name}={tau} is outside [0, 1].")
        unknown = set(self.branches) - {"y1|x1", "y1|x2", "y2|y1", "z|y2"}
        if unknown:
            raise DistributionException(f"Unknown switch branches {sorted(unknown)}.")


def _branch(matrix, given: VariableSpec, target_name: str) -> Factor:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.shape[0] != given.cardinality:
        raise DistributionException(
            f"Branch p({target_name}|{given.name}) has {matrix.shape[0]} rows, "
            f"expected {given.cardinality}."
        )
    return Factor([VariableSpec(target_name, matrix.shape[1])], [given], matrix)


def _input_factor(name: str, pmf) -> Factor:
    pmf = np.array([0.5, 0.5]) if pmf is None else np.asarray(pmf, dtype=np.float64)
    return Factor([VariableSpec(name, pmf.size)], [], pmf)


def _identity(card: int) -> np.ndarray:
    return np.eye(card)


def build_degraded_switch(
    params: SwitchChannelParams,
    y1_given_x1=None,
    y1_given_x2=None,
    y2_given_y1=None,
    z_given_y2=None,
    x1_pmf=None,
    x2_pmf=None,
) -> FactorizationSpec:
    """Build the degraded switch channel with inputs.

    With probability tau1 the switch S is 0 and Y1 follows p(y1|x1),
    otherwise S is 1 and Y1 follows p(y1|x2). Y2 and Z are then degraded
    versions p(y2|y1), p(z|y2). Receivers observe S alongside their output,
    see DEGRADED_SWITCH_OBSERVATIONS.

    Arguments:
        params: Switch probability and default branch laws.
        y1_given_x1: Branch law of Transmitter 1, overrides params.
        y1_given_x2: Branch law of Transmitter 2, overrides params.
        y2_given_y1: Degradation to the second receiver.
        z_given_y2: Degradation to the eavesdropper.
        x1_pmf: Input law of X1, default uniform binary.
        x2_pmf: Input law of X2, default uniform binary.

    Returns:
        Factorization over X1, X2, S, Y1, Y2, Z.

    Raises:
        DistributionException: If a branch law is malformed.
    """

    fx1 = _input_factor("X1", x1_pmf)
    fx2 = _input_factor("X2", x2_pmf)
    x1, x2 = fx1.targets[0], fx2.targets[0]
    pick = lambda given, key: given if given is not None else params.branches.get(key)

    m1 = pick(y1_given_x1, "y1|x1")
    m2 = pick(y1_given_x2, "y1|x2")
    m1 = _identity(x1.cardinality) if m1 is None else np.atleast_2d(m1)
    m2 = _identity(x2.cardinality) if m2 is None else np.atleast_2d(m2)
    b1 = _branch(m1, x1, "Y1")
    b2 = _branch(m2, x2, "Y1")
    if b1.targets[0].cardinality != b2.targets[0].cardinality:
        raise DistributionException("Both switch branches must share the Y1 alphabet.")
    y1 = b1.targets[0]

    s = VariableSpec("S", 2)
    tau = float(params.tau1)
    fs = Factor([s], [], [tau, 1.0 - tau])
    table = np.empty((x1.cardinality, x2.cardinality, 2, y1.cardinality))
    table[:, :, 0, :] = b1.table[:, None, :]
    table[:, :, 1, :] = b2.table[None, :, :]
    fy1 = Factor([y1], [x1, x2, s], table)

    m3 = pick(y2_given_y1, "y2|y1")
    fy2 = _branch(_identity(y1.cardinality) if m3 is None else m3, y1, "Y2")
    y2 = fy2.targets[0]
    m4 = pick(z_given_y2, "z|y2")
    fz = _branch(_identity(y2.cardinality) if m4 is None else m4, y2, "Z")

    logger.debug("Built degraded switch with tau=%s", tau)
    return FactorizationSpec([fx1, fx2, fs, fy1, fy2, fz])


def build_noiseless_switch(
    params: SwitchChannelParams, x1_pmf=None, x2_pmf=None
) -> FactorizationSpec:
    """Build the noiseless switch channel with inputs.

    Both legitimate receivers share switch S1 with P(S1=0)=tau1, so Y1 = Y2.
    The eavesdropper uses an independent switch S2 with P(S2=0)=tau2.
    State 0 connects Transmitter 1. Observers see their switch state, see
    NOISELESS_SWITCH_OBSERVATIONS.

    Arguments:
        params: tau1 and tau2; branches are ignored.
        x1_pmf: Input law of X1, default uniform binary.
        x2_pmf: Input law of X2, default uniform binary.

    Returns:
        Factorization over X1, X2, S1, S2, Y1, Y2, Z.

    Raises:
        DistributionException: If tau2 is missing.
    """

    if params.tau2 is None:
        raise DistributionException("The noiseless switch needs tau2.")
    fx1 = _input_factor("X1", x1_pmf)
    fx2 = _input_factor("X2", x2_pmf)
    x1, x2 = fx1.targets[0], fx2.targets[0]
    card = max(x1.cardinality, x2.cardinality)
    s1, s2 = VariableSpec("S1", 2), VariableSpec("S2", 2)
    fs1 = Factor([s1], [], [float(params.tau1), 1.0 - float(params.tau1)])
    fs2 = Factor([s2], [], [float(params.tau2), 1.0 - float(params.tau2)])
    switch = lambda a, b, s: a if s == 0 else b
    fy1 = Factor.deterministic([VariableSpec("Y1", card)], [x1, x2, s1], switch)
    fy2 = Factor.deterministic([VariableSpec("Y2", card)], [fy1.targets[0]], lambda y: y)
    fz = Factor.deterministic([VariableSpec("Z", card)], [x1, x2, s2], switch)
    return FactorizationSpec([fx1, fx2, fs1, fs2, fy1, fy2, fz])
