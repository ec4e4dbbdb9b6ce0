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

"""This module provides exact comparison of inequality systems."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ..dist_core import JointPmf
from .redundancy import Certificate, RedundancyMode, _ImplicationProgram, remove_redundant
from .system import IneqSystem, LinIneq, PolyhedraException

__all__ = ["EqualityVerdict", "symbolic_equal", "implied_by"]


@dataclass
class EqualityVerdict:
    """Result of a symbolic comparison.

    `equal` is True when both irredundant forms coincide up to positive
    scaling, or when every constraint of each side is certified by the other
    side. `witness` is a constraint of `side` ("left" or "right") that the
    other side does not certify.
    """

    equal: bool
    witness: Optional[LinIneq] = None
    side: Optional[str] = None
    syntactic: bool = False
    left_within_right: bool = False
    right_within_left: bool = False
    certificates: List[Certificate] = field(default_factory=list)

    def __bool__(self):
        return self.equal

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "syntactic": self.syntactic,
            "left_within_right": self.left_within_right,
            "right_within_left": self.right_within_left,
            "witness": None
            if self.witness is None
            else {"side": self.side, "tag": self.witness.tag, "inequality": str(self.witness)},
        }


def implied_by(
    premises: IneqSystem,
    targets: IneqSystem,
    mode: RedundancyMode,
    screens: Sequence[JointPmf] = (),
) -> Tuple[List[Certificate], Optional[LinIneq]]:
    """Certify every constraint of `targets` from `premises`.

    A target needed numerically at one of `screens` fails without solving.

    Returns:
        The certificates found and the first constraint without one.
    """

    if set(premises.rate_vars) != set(targets.rate_vars):
        raise PolyhedraException(
            "Rate variables differ: {} vs {}.".format(
                sorted(premises.rate_vars), sorted(targets.rate_vars)
            )
        )
    mode = RedundancyMode.parse(mode)
    pool = list(premises.all_constraints)
    goals = list(targets.all_constraints)
    program = _ImplicationProgram(premises.rate_vars, pool + goals, mode, screens=screens)
    held = range(len(pool), len(pool) + len(goals))
    certs: List[Certificate] = []
    for k, target in zip(held, goals):
        if program.screened_out(k, held):
            return certs, target
        cert = program.certify(target, exclude=held)
        if cert is None:
            return certs, target
        certs.append(cert)
    return certs, None


def symbolic_equal(
    a: IneqSystem,
    b: IneqSystem,
    mode: RedundancyMode = RedundancyMode.FARKAS_SHANNON,
    screens: Sequence[JointPmf] = (),
) -> EqualityVerdict:
    """Decide whether two systems describe the same region symbolically.

    Both systems are reduced to irredundant form. If the forms match up to
    positive scaling the answer is syntactic; otherwise each constraint of
    one side must be certified by the other.

    Arguments:
        a: Left system.
        b: Right system.
        mode: Redundancy mode for reduction and certification.
        screens: Sample joints for numeric screening, see remove_redundant.

    Returns:
        An EqualityVerdict, truthy when equal.

    Raises:
        PolyhedraException: If the rate variables differ.

    Examples:
       >>> verdict = symbolic_equal(derived, published)
       >>> verdict.equal, verdict.witness
    """

    mode = RedundancyMode.parse(mode)
    if set(a.rate_vars) != set(b.rate_vars):
        raise PolyhedraException(
            "Rate variables differ: {} vs {}.".format(sorted(a.rate_vars), sorted(b.rate_vars))
        )
    ra, rb = remove_redundant(a, mode, screens=screens), remove_redundant(b, mode, screens=screens)
    if ra == rb:
        return EqualityVerdict(True, syntactic=True, left_within_right=True, right_within_left=True)

    certs_ab, witness_a = implied_by(rb, ra, mode, screens)
    certs_ba, witness_b = implied_by(ra, rb, mode, screens)
    verdict = EqualityVerdict(
        witness_a is None and witness_b is None,
        left_within_right=witness_b is None,
        right_within_left=witness_a is None,
        certificates=certs_ab + certs_ba,
    )
    if witness_a is not None:
        verdict.witness, verdict.side = witness_a, "left"
    elif witness_b is not None:
        verdict.witness, verdict.side = witness_b, "right"
    return verdict
