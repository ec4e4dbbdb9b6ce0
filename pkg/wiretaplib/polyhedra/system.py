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

"""This module provides linear inequality systems over rate variables whose
right-hand sides are information expressions.

Every inequality is stored as `sum(coeffs[v] * v) <= constant` and scaled so
that its first nonzero coefficient (rate variables by name, then atoms) has
magnitude 1. Inequalities without rate variables are assumptions on the
distribution, such as `0 <= I(...) - I(...)`.
"""

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sortedcontainers import SortedDict

from ..info_measures import InfoExpr
from ..utils import as_fraction, fraction_to_str

__all__ = [
    "PolyhedraException",
    "RateVar",
    "LinIneq",
    "IneqSystem",
    "nonnegativity",
]

Number = Union[int, str, Fraction]


class PolyhedraException(Exception):
    """Exception raised by inequality systems and their operations."""

    pass


class RateVar(str):
    """A named rate variable, e.g. R1 or Rt1'.

    Rate variables are plain strings with validation, so they can be used as
    dictionary keys interchangeably with their names.
    """

    def __new__(cls, name: str):
        name = str(name).strip()
        if not name or not (name[0].isalpha()):
            raise PolyhedraException(f"Invalid rate variable name: {name!r}.")
        return super().__new__(cls, name)


class LinIneq:
    """A canonical linear inequality `sum(coeffs[v] * v) <= constant`.

    Examples:
       >>> ineq = LinIneq({"R1": 2}, InfoExpr.atom("X") * 2, tag="r1")
       >>> str(ineq)
       'R1 <= H(X)'
    """

    __slots__ = ("coeffs", "constant", "tag", "_key")

    def __init__(
        self,
        coeffs: Mapping[str, Number],
        constant: Union[InfoExpr, Number] = 0,
        tag: str = "",
    ):
        clean = SortedDict()
        for var, c in coeffs.items():
            c = as_fraction(c)
            if c:
                clean[RateVar(var)] = clean.get(var, Fraction(0)) + c
        if not isinstance(constant, InfoExpr):
            constant = InfoExpr.const(constant)
        if clean:
            pivot = abs(next(iter(clean.values())))
        elif constant.terms:
            pivot = abs(next(iter(constant.terms.values())))
        elif constant.constant:
            pivot = abs(constant.constant)
        else:
            raise PolyhedraException(f"Trivial inequality 0 <= 0 ({tag or 'untagged'}).")
        if pivot != 1:
            clean = SortedDict({v: c / pivot for v, c in clean.items()})
            constant = constant / pivot
        self.coeffs: Mapping[str, Fraction] = clean
        self.constant: InfoExpr = constant
        self.tag = tag
        self._key = (tuple(clean.items()), constant)

    @classmethod
    def le(cls, lhs: Mapping[str, Number], rhs: Union[InfoExpr, Number], tag: str = "") -> "LinIneq":
        return cls(lhs, rhs, tag)

    @classmethod
    def ge(cls, lhs: Mapping[str, Number], rhs: Union[InfoExpr, Number], tag: str = "") -> "LinIneq":
        """Build `lhs >= rhs` as `-lhs <= -rhs`."""
        if not isinstance(rhs, InfoExpr):
            rhs = InfoExpr.const(rhs)
        return cls({v: -as_fraction(c) for v, c in lhs.items()}, -rhs, tag)

    @property
    def key(self) -> tuple:
        """Identity of the inequality, ignoring its tag."""
        return self._key

    @property
    def is_assumption(self) -> bool:
        return not self.coeffs

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self.coeffs)

    def coeff(self, var: str) -> Fraction:
        return self.coeffs.get(var, Fraction(0))

    def is_trivial(self) -> bool:
        """True for `0 <= c` with a nonnegative numeric c."""
        return not self.coeffs and not self.constant.terms and self.constant.constant >= 0

    def combine(self, other: "LinIneq", a: Fraction, b: Fraction, tag: str = "") -> Optional["LinIneq"]:
        """Return a*self + b*other for a, b > 0, or None when it is 0 <= 0."""
        coeffs: Dict[str, Fraction] = {}
        for ineq, k in ((self, a), (other, b)):
            for v, c in ineq.coeffs.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + k * c
        constant = self.constant * a + other.constant * b
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs and constant.is_zero():
            return None
        return LinIneq(coeffs, constant, tag or f"{self.tag}+{other.tag}")

    def substitute(self, mapping: Mapping[str, Sequence[str]]) -> Optional["LinIneq"]:
        """Substitute random variables inside the constant; None if trivial."""
        constant = self.constant.substitute(mapping)
        if not self.coeffs and constant.is_zero():
            return None
        ineq = LinIneq(self.coeffs, constant, self.tag)
        return None if ineq.is_trivial() else ineq

    def retag(self, tag: str) -> "LinIneq":
        return LinIneq(self.coeffs, self.constant, tag)

    def lhs_str(self) -> str:
        if not self.coeffs:
            return "0"
        text = ""
        for i, (v, c) in enumerate(self.coeffs.items()):
            mag = abs(c)
            body = v if mag == 1 else f"{fraction_to_str(mag)}*{v}"
            if i == 0:
                text = body if c > 0 else f"-{body}"
            else:
                text += f" {'+' if c > 0 else '-'} {body}"
        return text

    def __str__(self):
        return f"{self.lhs_str()} <= {self.constant}"

    def __repr__(self):
        return f"LinIneq({self.tag}: {self})"

    def __eq__(self, other):
        return isinstance(other, LinIneq) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "coeffs": {v: fraction_to_str(c) for v, c in self.coeffs.items()},
            "constant": self.constant.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinIneq":
        try:
            return cls(obj.get("coeffs", {}), InfoExpr.from_json(obj["constant"]), obj.get("tag", ""))
        except KeyError as e:
            raise PolyhedraException(f"Inequality is missing key {e}.")


def nonnegativity(var: str) -> LinIneq:
    """`var >= 0` as `-var <= 0`."""
    return LinIneq({var: -1}, 0, tag=f"nonneg.{var}")


class IneqSystem:
    """A set of canonical inequalities over declared rate variables.

    The region of a system always lies in the nonnegative orthant of its rate
    variables. Inequalities without rate variables are kept apart as
    assumptions. Duplicates (equal up to positive scaling) keep the first tag.

    Examples:
       >>> s = IneqSystem(["R1"], [LinIneq({"R1": 1}, InfoExpr.atom("X"))])
       >>> len(s)
       1
    """

    def __init__(
        self,
        rate_vars: Iterable[str],
        inequalities: Iterable[LinIneq] = (),
        assumptions: Iterable[LinIneq] = (),
        name: str = "",
    ):
        self.rate_vars: Tuple[RateVar, ...] = tuple(RateVar(v) for v in rate_vars)
        if len(set(self.rate_vars)) != len(self.rate_vars):
            raise PolyhedraException(f"Duplicate rate variables in {list(self.rate_vars)}.")
        declared = set(self.rate_vars)
        ineqs: Dict[tuple, LinIneq] = {}
        assums: Dict[tuple, LinIneq] = {}
        for ineq in list(inequalities) + list(assumptions):
            unknown = set(ineq.coeffs) - declared
            if unknown:
                raise PolyhedraException(
                    f"Inequality {ineq.tag or ineq} uses undeclared rate variables {sorted(unknown)}."
                )
            if ineq.is_trivial():
                continue
            target = assums if ineq.is_assumption else ineqs
            target.setdefault(ineq.key, ineq)
        self.inequalities: Tuple[LinIneq, ...] = tuple(ineqs.values())
        self.assumptions: Tuple[LinIneq, ...] = tuple(assums.values())
        self.name = name

    def __len__(self):
        return len(self.inequalities)

    def __iter__(self) -> Iterator[LinIneq]:
        return iter(self.inequalities)

    def __eq__(self, other):
        """Syntactic equality of canonical forms, ignoring order and tags."""
        if not isinstance(other, IneqSystem):
            return NotImplemented
        return (
            set(self.rate_vars) == set(other.rate_vars)
            and {i.key for i in self.inequalities} == {i.key for i in other.inequalities}
            and {a.key for a in self.assumptions} == {a.key for a in other.assumptions}
        )

    __hash__ = None

    @property
    def all_constraints(self) -> Tuple[LinIneq, ...]:
        return self.inequalities + self.assumptions

    def atoms(self) -> frozenset:
        return frozenset(a for i in self.all_constraints for a in i.constant.atoms)

    def random_variables(self) -> frozenset:
        return frozenset(v for a in self.atoms() for v in a.vars)

    def by_tag(self, tag: str) -> LinIneq:
        for ineq in self.all_constraints:
            if ineq.tag == tag:
                return ineq
        raise PolyhedraException(f"No inequality tagged {tag!r}.")

    def replace(
        self,
        rate_vars: Optional[Iterable[str]] = None,
        inequalities: Optional[Iterable[LinIneq]] = None,
        assumptions: Optional[Iterable[LinIneq]] = None,
        name: Optional[str] = None,
    ) -> "IneqSystem":
        return IneqSystem(
            self.rate_vars if rate_vars is None else rate_vars,
            self.inequalities if inequalities is None else inequalities,
            self.assumptions if assumptions is None else assumptions,
            self.name if name is None else name,
        )

    def without(self, tags: Iterable[str]) -> "IneqSystem":
        tags = set(tags)
        missing = tags - {i.tag for i in self.all_constraints}
        if missing:
            raise PolyhedraException(f"No inequalities tagged {sorted(missing)}.")
        return self.replace(
            inequalities=[i for i in self.inequalities if i.tag not in tags],
            assumptions=[a for a in self.assumptions if a.tag not in tags],
        )

    def substitute(self, mapping: Mapping[str, Sequence[str]], name: Optional[str] = None) -> "IneqSystem":
        """Substitute random variables in every constant.

        Arguments:
            mapping: Variable name to replacement names; an empty tuple makes
                the variable constant.
            name: Name of the new system.

        Returns:
            The substituted system; constraints that become 0 <= 0 are dropped.
        """
        out = []
        for ineq in self.all_constraints:
            new = ineq.substitute(mapping)
            if new is not None:
                out.append(new)
        return IneqSystem(self.rate_vars, out, name=self.name if name is None else name)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rate_vars": list(self.rate_vars),
            "inequalities": [i.to_json() for i in self.inequalities],
            "assumptions": [a.to_json() for a in self.assumptions],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IneqSystem":
        try:
            return cls(
                obj["rate_vars"],
                [LinIneq.from_json(i) for i in obj.get("inequalities", [])],
                [LinIneq.from_json(a) for a in obj.get("assumptions", [])],
                obj.get("name", ""),
            )
        except (KeyError, TypeError) as e:
            raise PolyhedraException(f"Invalid inequality system: {e}.")

    def __str__(self):
        lines = [f"rates: {' '.join(self.rate_vars)}"]
        for ineq in self.all_constraints:
            prefix = f"{ineq.tag}: " if ineq.tag else ""
            lines.append(f"{prefix}{ineq}")
        return "\n".join(lines)

    def __repr__(self):
        return "IneqSystem({}, {} inequalities, {} assumptions)".format(
            self.name or "-", len(self.inequalities), len(self.assumptions)
        )
