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

from fractions import Fraction

import common
import pytest

from wiretaplib import info_measures
from wiretaplib.info_measures import (
    EntropyAtom,
    InfoExpr,
    InfoMeasureException,
    cond_entropy_expr,
    mutual_info_expr,
)


def test_atom_canonical_order():
    assert str(EntropyAtom(["Z", "U0"])) == "H(U0,Z)"
    assert EntropyAtom("X,Y") == EntropyAtom(["Y", "X"])
    assert EntropyAtom("Z") < EntropyAtom("A,B")
    with pytest.raises(InfoMeasureException):
        EntropyAtom([])


def test_expression_arithmetic():
    e = mutual_info_expr("X", "Y")
    assert str(e) == "H(X) + H(Y) - H(X,Y)"
    assert (e - e).is_zero()
    assert str(e * Fraction(1, 2) + 1) == "1/2*H(X) + 1/2*H(Y) - 1/2*H(X,Y) + 1"
    assert InfoExpr.from_json(e.to_json()) == e


def test_chain_rule_is_exact():
    lhs = mutual_info_expr("X", "Y,Z")
    rhs = mutual_info_expr("X", "Y") + mutual_info_expr("X", "Z", "Y")
    assert lhs == rhs
    assert cond_entropy_expr("X", "Y") == InfoExpr.atom("X,Y") - InfoExpr.atom("Y")


def test_overlapping_arguments():
    with pytest.raises(InfoMeasureException):
        mutual_info_expr("X", "X")
    with pytest.raises(InfoMeasureException):
        mutual_info_expr("X", "Y", "Y")
    with pytest.raises(InfoMeasureException):
        cond_entropy_expr("X,Y", "Y")


def test_substitute():
    e = mutual_info_expr("U0", "Z", "Q")
    assert e.substitute({"U0": ("X1",), "Q": ()}) == mutual_info_expr("X1", "Z")
    # a variable made constant drops out
    assert InfoExpr.atom("Q").substitute({"Q": ()}).is_zero()


def test_entropy_values():
    joint = common.xor_joint()
    assert info_measures.entropy(joint, "X1") == pytest.approx(1.0)
    assert info_measures.entropy(joint, "X1,X2,Y1") == pytest.approx(2.0)
    assert info_measures.entropy(joint, "Z") == pytest.approx(0.0)
    with pytest.raises(InfoMeasureException):
        info_measures.entropy(joint, [])
    with pytest.raises(InfoMeasureException):
        info_measures.entropy(joint, "W")


def test_eval_expr():
    joint = common.xor_joint()
    cache = {}
    # Y1 is independent of either input alone, determined by both
    assert info_measures.eval_expr(mutual_info_expr("X1", "Y1"), joint, cache) == pytest.approx(
        0.0, abs=common.ATOL
    )
    assert info_measures.eval_expr(
        mutual_info_expr("X1", "Y1", "X2"), joint, cache
    ) == pytest.approx(1.0)
    assert info_measures.eval_expr(cond_entropy_expr("Y1", "X1,X2"), joint, cache) == pytest.approx(
        0.0, abs=common.ATOL
    )
    assert EntropyAtom("X1") in cache


def test_random_joint_identities():
    joint = common.random_joint(
        ["X", "Y|X", "Z|X,Y"], {"X": 3, "Y": 2, "Z": 2}, seed=11
    )
    ev = lambda e: info_measures.eval_expr(e, joint)
    assert ev(mutual_info_expr("X", "Y")) >= -common.ATOL
    assert ev(mutual_info_expr("X", "Y")) == pytest.approx(ev(mutual_info_expr("Y", "X")))
    assert ev(cond_entropy_expr("X", "Y")) <= ev(InfoExpr.atom("X")) + common.ATOL
