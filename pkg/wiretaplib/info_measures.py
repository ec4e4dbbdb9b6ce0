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

"""This module provides joint-entropy atoms, exact information expressions
and their numerical evaluation.

Every Shannon quantity is written in the joint-entropy basis: H(A|C) is
H(A,C) - H(C) and I(A;B|C) is H(A,C) + H(B,C) - H(A,B,C) - H(C). Coefficients
are exact rationals, so two expressions are equal iff their term maps are.
All values are in bits.
"""

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sortedcontainers import SortedDict

from .dist_core import JointPmf
from .utils import as_fraction, fraction_to_str

__all__ = [
    "InfoMeasureException",
    "EntropyAtom",
    "InfoExpr",
    "entropy",
    "entropy_expr",
    "cond_entropy_expr",
    "mutual_info_expr",
    "eval_expr",
]

ZERO_PROB = 1e-15

Number = Union[int, Fraction, str]


class InfoMeasureException(Exception):
    """Exception raised by information measure construction and evaluation."""

    pass


def _names(subset: Union[str, Iterable[str]]) -> Tuple[str, ...]:
    if isinstance(subset, str):
        subset = [s for s in subset.replace(" ", "").split(",") if s]
    return tuple(subset)


class EntropyAtom:
    """The joint entropy H(S) of a nonempty variable subset S.

    Atoms order by subset size, then lexicographically.

    Examples:
       >>> str(EntropyAtom(["Z", "U0"]))
       'H(U0,Z)'
    """

    __slots__ = ("vars", "_key")

    def __init__(self, variables: Union[str, Iterable[str]]):
        names = frozenset(_names(variables))
        if not names:
            raise InfoMeasureException("An entropy atom needs a nonempty subset.")
        self.vars: Tuple[str, ...] = tuple(sorted(names))
        self._key = (len(self.vars), self.vars)

    @property
    def varset(self) -> frozenset:
        return frozenset(self.vars)

    def union(self, other: "EntropyAtom") -> "EntropyAtom":
        return EntropyAtom(self.vars + other.vars)

    def __eq__(self, other):
        return isinstance(other, EntropyAtom) and self.vars == other.vars

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def __hash__(self):
        return hash(self.vars)

    def __str__(self):
        return "H({})".format(",".join(self.vars))

    __repr__ = __str__


class InfoExpr:
    """An exact-rational linear combination of entropy atoms plus a constant.

    Instances are immutable; arithmetic returns new canonical expressions
    without zero coefficients.

    Examples:
       >>> e = mutual_info_expr(["X"], ["Y"])
       >>> str(e)
       'H(X) + H(Y) - H(X,Y)'
    """

    __slots__ = ("_terms", "_constant", "_hash")

    def __init__(self, terms: Optional[Mapping[EntropyAtom, Number]] = None, constant: Number = 0):
        clean = SortedDict()
        for atom, coeff in (terms or {}).items():
            if not isinstance(atom, EntropyAtom):
                atom = EntropyAtom(atom)
            c = as_fraction(coeff)
            total = clean.get(atom, Fraction(0)) + c
            if total:
                clean[atom] = total
            else:
                clean.pop(atom, None)
        self._terms = clean
        self._constant = as_fraction(constant)
        self._hash = None

    @classmethod
    def atom(cls, variables: Union[str, Iterable[str]], coeff: Number = 1) -> "InfoExpr":
        return cls({EntropyAtom(variables): coeff})

    @classmethod
    def const(cls, value: Number) -> "InfoExpr":
        return cls(constant=value)

    @property
    def terms(self) -> Mapping[EntropyAtom, Fraction]:
        return self._terms

    @property
    def constant(self) -> Fraction:
        return self._constant

    @property
    def atoms(self) -> Tuple[EntropyAtom, ...]:
        return tuple(self._terms.keys())

    @property
    def variables(self) -> frozenset:
        return frozenset(v for a in self._terms for v in a.vars)

    def is_zero(self) -> bool:
        return not self._terms and not self._constant

    def is_constant(self) -> bool:
        return not self._terms

    def coeff(self, atom: EntropyAtom) -> Fraction:
        return self._terms.get(atom, Fraction(0))

    def __add__(self, other: Union["InfoExpr", Number]) -> "InfoExpr":
        if not isinstance(other, InfoExpr):
            other = InfoExpr.const(other)
        terms: Dict[EntropyAtom, Fraction] = dict(self._terms)
        for atom, c in other._terms.items():
            terms[atom] = terms.get(atom, Fraction(0)) + c
        return InfoExpr(terms, self._constant + other._constant)

    __radd__ = __add__

    def __neg__(self) -> "InfoExpr":
        return self * -1

    def __sub__(self, other: Union["InfoExpr", Number]) -> "InfoExpr":
        if not isinstance(other, InfoExpr):
            other = InfoExpr.const(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> "InfoExpr":
        return InfoExpr.const(other) - self

    def __mul__(self, scalar: Number) -> "InfoExpr":
        k = as_fraction(scalar)
        return InfoExpr({a: c * k for a, c in self._terms.items()}, self._constant * k)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number) -> "InfoExpr":
        k = as_fraction(scalar)
        if not k:
            raise ZeroDivisionError("InfoExpr division by zero")
        return self * (1 / k)

    def __eq__(self, other):
        if not isinstance(other, InfoExpr):
            return NotImplemented
        return self._constant == other._constant and list(self._terms.items()) == list(
            other._terms.items()
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self._terms.items()), self._constant))
        return self._hash

    def substitute(self, mapping: Mapping[str, Sequence[str]]) -> "InfoExpr":
        """Replace variables by tuples of variables in every atom.

        A variable mapped to an empty tuple becomes a constant and disappears;
        an atom whose variables all disappear is H(constant) = 0.
        """
        terms: Dict[EntropyAtom, Fraction] = {}
        for atom, c in self._terms.items():
            names = []
            for v in atom.vars:
                names.extend(mapping.get(v, (v,)))
            if not names:
                continue
            new = EntropyAtom(names)
            terms[new] = terms.get(new, Fraction(0)) + c
        return InfoExpr(terms, self._constant)

    def __str__(self):
        parts = []
        for atom, c in self._terms.items():
            mag = abs(c)
            body = str(atom) if mag == 1 else f"{fraction_to_str(mag)}*{atom}"
            parts.append(("-" if c < 0 else "+", body))
        if self._constant:
            parts.append(
                ("-" if self._constant < 0 else "+", fraction_to_str(abs(self._constant)))
            )
        if not parts:
            return "0"
        sign, body = parts[0]
        text = body if sign == "+" else f"-{body}"
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"InfoExpr({self})"

    def to_json(self) -> dict:
        return {
            "terms": [[list(a.vars), fraction_to_str(c)] for a, c in self._terms.items()],
            "constant": fraction_to_str(self._constant),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "InfoExpr":
        try:
            terms = {EntropyAtom(vs): c for vs, c in obj.get("terms", [])}
            return cls(terms, obj.get("constant", 0))
        except (TypeError, ValueError) as e:
            raise InfoMeasureException(f"Invalid information expression: {e}.")


def entropy(joint: JointPmf, subset: Union[str, Iterable[str]]) -> float:
    """Joint entropy of `subset` in bits.

    Arguments:
        joint: Joint pmf.
        subset: Nonempty variable names.

    Returns:
        -sum p log2 p over the marginal, with probabilities below 1e-15
        treated as zero.

    Raises:
        InfoMeasureException: If `subset` is empty or not in the joint.
    """

    names = tuple(sorted(set(_names(subset))))
    if not names:
        raise InfoMeasureException("Entropy of an empty subset is undefined.")
    missing = [n for n in names if n not in joint]
    if missing:
        raise InfoMeasureException(f"Variables {missing} are not in {joint}.")
    p = joint.marginal_tensor(names).reshape(-1)
    p = p[p > ZERO_PROB]
    return max(0.0, float(-np.sum(p * np.log2(p))))


def entropy_expr(a: Union[str, Iterable[str]]) -> InfoExpr:
    return InfoExpr.atom(a)


def cond_entropy_expr(a: Union[str, Iterable[str]], c: Union[str, Iterable[str]] = ()) -> InfoExpr:
    """H(A|C) = H(A,C) - H(C)."""
    a, c = _names(a), _names(c)
    if not a:
        raise InfoMeasureException("H(A|C) needs a nonempty A.")
    overlap = set(a) & set(c)
    if overlap:
        raise InfoMeasureException(f"H(A|C) with overlapping arguments {sorted(overlap)}.")
    expr = InfoExpr.atom(a + c)
    return expr - InfoExpr.atom(c) if c else expr


def mutual_info_expr(
    a: Union[str, Iterable[str]],
    b: Union[str, Iterable[str]],
    c: Union[str, Iterable[str]] = (),
) -> InfoExpr:
    """I(A;B|C) in the joint-entropy basis.

    Arguments:
        a: Nonempty subset.
        b: Nonempty subset disjoint from `a`.
        c: Conditioning subset, possibly empty.

    Returns:
        H(A,C) + H(B,C) - H(A,B,C) - H(C), without H(C) when C is empty.

    Raises:
        InfoMeasureException: If a subset is empty or two subsets overlap.

    Examples:
       >>> str(mutual_info_expr("X", "Y"))
       'H(X) + H(Y) - H(X,Y)'
    """

    a, b, c = _names(a), _names(b), _names(c)
    if not a or not b:
        raise InfoMeasureException("I(A;B|C) needs nonempty A and B.")
    for left, right, label in ((a, b, "A and B"), (a, c, "A and C"), (b, c, "B and C")):
        overlap = set(left) & set(right)
        if overlap:
            raise InfoMeasureException(
                f"I(A;B|C) with overlapping {label}: {sorted(overlap)}."
            )
    expr = InfoExpr.atom(a + c) + InfoExpr.atom(b + c) - InfoExpr.atom(a + b + c)
    if c:
        expr = expr - InfoExpr.atom(c)
    return expr


def eval_expr(
    expr: InfoExpr, joint: JointPmf, cache: Optional[Dict[EntropyAtom, float]] = None
) -> float:
    """Evaluate `expr` on `joint` in bits.

    Arguments:
        expr: Information expression.
        joint: Joint pmf whose scope covers every atom.
        cache: Optional atom to entropy cache shared across calls on the
            same joint.

    Returns:
        sum of coefficient * entropy(atom) plus the constant.

    Raises:
        InfoMeasureException: If an atom is out of the joint's scope.
    """

    total = float(expr.constant)
    for atom, c in expr.terms.items():
        if cache is not None and atom in cache:
            h = cache[atom]
        else:
            h = entropy(joint, atom.vars)
            if cache is not None:
                cache[atom] = h
        total += float(c) * h
    return total
