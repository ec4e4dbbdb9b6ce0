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

import dataclasses
import logging
from fractions import Fraction

import common
import numpy as np
import pytest

from wiretaplib import polyhedra
from wiretaplib.info_measures import EntropyAtom, InfoExpr, mutual_info_expr
from wiretaplib.polyhedra import (
    IneqSystem,
    LinIneq,
    PolyhedraException,
    RedundancyMode,
)

H = InfoExpr.atom


class TestLinIneq:
    def test_normalized_by_first_coefficient(self):
        ineq = LinIneq({"R1": 2}, H("X") * 2, tag="r1")
        assert str(ineq) == "R1 <= H(X)"
        assert ineq == LinIneq({"R1": 1}, H("X"))

    def test_ge(self):
        ineq = LinIneq.ge({"R1": 1}, 0)
        assert str(ineq) == "-R1 <= 0"
        assert LinIneq.ge({"R1": 1, "R2": 1}, H("X")).coeff("R2") == Fraction(-1)

    def test_trivial(self):
        with pytest.raises(PolyhedraException):
            LinIneq({}, 0)
        assert LinIneq({}, 3).is_trivial()
        assert not LinIneq({}, H("X")).is_trivial()

    def test_invalid_rate_name(self):
        with pytest.raises(PolyhedraException):
            LinIneq({"1R": 1}, 0)

    def test_json(self):
        ineq = LinIneq({"R1": 1, "Rd": Fraction(-1, 2)}, mutual_info_expr("U", "Z"), "t")
        again = LinIneq.from_json(ineq.to_json())
        assert again == ineq and again.tag == "t"


class TestIneqSystem:
    def test_dedupe_and_assumptions(self):
        s = IneqSystem(
            ["R1"],
            [
                LinIneq({"R1": 1}, H("X"), "a"),
                LinIneq({"R1": 3}, H("X") * 3, "b"),
                LinIneq({}, H("X") - 1, "assume"),
                LinIneq({}, 2, "trivial"),
            ],
        )
        assert len(s) == 1
        assert s.inequalities[0].tag == "a"
        assert [a.tag for a in s.assumptions] == ["assume"]

    def test_undeclared_rate(self):
        with pytest.raises(PolyhedraException):
            IneqSystem(["R1"], [LinIneq({"R2": 1}, 0)])
        with pytest.raises(PolyhedraException):
            IneqSystem(["R1", "R1"])

    def test_substitute_and_without(self):
        s = IneqSystem(["R1"], [LinIneq({"R1": 1}, mutual_info_expr("U", "Z"), "r1")])
        reduced = s.substitute({"U": ("X",)})
        assert reduced.inequalities[0] == LinIneq({"R1": 1}, mutual_info_expr("X", "Z"))
        assert len(s.without(["r1"])) == 0
        with pytest.raises(PolyhedraException):
            s.without(["missing"])

    def test_json(self):
        s = IneqSystem(
            ["R1", "R2"],
            [LinIneq({"R1": 1, "R2": 1}, H("X,Y"), "sum")],
            [LinIneq({}, H("X") - H("Y"), "a")],
            name="demo",
        )
        again = IneqSystem.from_json(s.to_json())
        assert again == s and again.name == "demo"


class TestElimination:
    def test_numeric_constants(self):
        s = IneqSystem(
            ["R1", "Ra"],
            [LinIneq({"R1": 1, "Ra": 1}, 2, "sum"), LinIneq({"R1": 1, "Ra": -1}, 0, "below")],
        )
        raw = polyhedra.fm_eliminate(s, "Ra", mode=None)
        assert raw.rate_vars == ("R1",)
        assert {str(i) for i in raw} == {"R1 <= 1", "R1 <= 2"}
        reduced = polyhedra.fm_eliminate(s, "Ra", RedundancyMode.FARKAS)
        assert [str(i) for i in reduced] == ["R1 <= 1"]

    def test_information_constants(self):
        s = IneqSystem(
            ["R1", "Ra"],
            [LinIneq({"Ra": 1}, H("X"), "cap"), LinIneq({"R1": 1, "Ra": -1}, 0, "below")],
        )
        audit = []
        projected, stats = polyhedra.fm_project(s, ["Ra"], audit=audit)
        assert projected == IneqSystem(["R1"], [LinIneq({"R1": 1}, H("X"))])
        assert len(stats) == 1 and stats[0].var == "Ra"
        assert all(c.verify() for c in audit)

    def test_unknown_variable(self):
        s = IneqSystem(["R1"], [LinIneq({"R1": 1}, 1)])
        with pytest.raises(PolyhedraException):
            polyhedra.fm_eliminate(s, "R2")
        with pytest.raises(PolyhedraException):
            polyhedra.fm_project(s, ["R2"])

    def test_random_systems_match_vertex_projection(self):
        rng = np.random.default_rng(9)

        def rounded(points):
            return sorted(tuple(round(x, 7) for x in p) for p in points)

        for trial in range(50):
            ineqs = [LinIneq({"R1": 1, "R2": 1, "Ra": 1}, 10, "box")]
            for k in range(4):
                draw = rng.integers(-3, 4, size=3)
                coeffs = {v: int(c) for v, c in zip(("R1", "R2", "Ra"), draw) if c}
                if coeffs:
                    ineqs.append(LinIneq(coeffs, int(rng.integers(1, 8)), f"c{k}"))
            system = IneqSystem(["R1", "R2", "Ra"], ineqs)
            projected = polyhedra.fm_eliminate(system, "Ra", mode=None)
            expected = polyhedra.numeric_region(system).project(["R1", "R2"])
            got = polyhedra.extreme_points_2d(polyhedra.numeric_region(projected).vertices)
            assert rounded(got) == rounded(expected), trial
            reduced = polyhedra.remove_redundant(projected, RedundancyMode.FARKAS)
            assert len(reduced) <= len(projected)
            assert polyhedra.numeric_region(reduced).same_as(
                polyhedra.numeric_region(projected), tol=1e-7
            ), trial

    def test_project_logs_enter_exit(self, caplog):
        s = IneqSystem(
            ["R1", "Ra"],
            [LinIneq({"Ra": 1}, H("X"), "cap"), LinIneq({"R1": 1, "Ra": -1}, 0, "below")],
        )
        caplog.set_level(logging.DEBUG, logger="wiretaplib.polyhedra")
        polyhedra.fm_project(s, ["Ra"])
        assert "fm_project entered" in caplog.text
        assert "fm_project exited" in caplog.text


class TestRedundancy:
    def test_shannon_monotonicity(self):
        s = IneqSystem(
            ["R1"], [LinIneq({"R1": 1}, H("A"), "a"), LinIneq({"R1": 1}, H("A,B"), "ab")]
        )
        farkas = polyhedra.remove_redundant(s, RedundancyMode.FARKAS)
        assert len(farkas) == 2
        audit = []
        shannon = polyhedra.remove_redundant(s, RedundancyMode.FARKAS_SHANNON, audit)
        assert [i.tag for i in shannon] == ["a"]
        assert len(audit) == 1 and audit[0].verify()

    def test_implies(self):
        s = IneqSystem(["R1", "R2"], [LinIneq({"R1": 1, "R2": 1}, H("X"), "sum")])
        cert = polyhedra.implies(s, LinIneq({"R1": 1}, H("X")))
        assert cert is not None and cert.verify()
        assert polyhedra.implies(s, LinIneq({"R1": 1}, H("X") - 1)) is None

    def submodular_system(self):
        # I(A;B|C) >= 0 is the only Shannon inequality that relates the two
        return IneqSystem(
            ["R1"],
            [
                LinIneq({"R1": 1}, H("A,B,C") + H("C"), "joint"),
                LinIneq({"R1": 1}, H("A,C") + H("B,C"), "pairs"),
            ],
        )

    def test_shannon_submodularity(self):
        s = self.submodular_system()
        assert len(polyhedra.remove_redundant(s, RedundancyMode.FARKAS)) == 2
        audit = []
        shannon = polyhedra.remove_redundant(s, RedundancyMode.FARKAS_SHANNON, audit)
        assert [i.tag for i in shannon] == ["joint"]
        assert len(audit) == 1 and audit[0].verify()
        assert audit[0].submodular
        assert "submodular" in audit[0].to_json()

    def test_weakened_bound_is_one_sided(self):
        s = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("A,C") + H("B,C") - H("A,B,C") - H("C"))])
        cert = polyhedra.implies(s, LinIneq({"R1": 1}, H("A,C") + H("B,C") - H("C")))
        assert cert is not None and cert.verify()
        # the reverse direction is not a Shannon inequality
        back = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("A,C") + H("B,C") - H("C"))])
        target = LinIneq({"R1": 1}, H("A,C") + H("B,C") - H("A,B,C") - H("C"))
        assert polyhedra.implies(back, target) is None

    def test_tampered_certificate_fails(self):
        audit = []
        polyhedra.remove_redundant(self.submodular_system(), audit=audit)
        cert = audit[0]
        a, b, xi = cert.submodular[0]
        broken = dataclasses.replace(cert, submodular=((a, b, xi * 2),))
        assert not broken.verify()
        negative = dataclasses.replace(cert, submodular=((a, b, -xi),))
        assert not negative.verify()

    def test_screening_keeps_the_outcome(self, caplog):
        joints = [common.random_joint(["A", "B|A", "C|A,B"], {"A": 2, "B": 2, "C": 2}, seed=k) for k in range(6)]
        s = self.submodular_system()
        plain = polyhedra.remove_redundant(s)
        caplog.set_level(logging.DEBUG, logger="wiretaplib.polyhedra")
        screened = polyhedra.remove_redundant(s, screens=joints)
        assert screened == plain
        assert "1 screened" in caplog.text

    def test_screening_ignores_foreign_joints(self):
        s = self.submodular_system()
        foreign = [common.xor_joint()]
        assert polyhedra.remove_redundant(s, screens=foreign) == polyhedra.remove_redundant(s)

    def test_implies_with_screens(self):
        joints = [common.random_joint(["A", "B|A", "C|A,B"], {"A": 2, "B": 2, "C": 2}, seed=k) for k in range(4)]
        s = IneqSystem(["R1", "R2"], [LinIneq({"R1": 1, "R2": 1}, H("A"), "sum")])
        assert polyhedra.implies(s, LinIneq({"R1": 1}, H("A,B")), screens=joints) is not None
        assert polyhedra.implies(s, LinIneq({"R1": 1}, H("A") - H("A,B")), screens=joints) is None
        assert polyhedra.implies(s, LinIneq({"R3": 1}, H("A"))) is None

    def test_mode_parse(self):
        assert RedundancyMode.parse("FARKAS+Shannon") is RedundancyMode.FARKAS_SHANNON
        with pytest.raises(ValueError):
            RedundancyMode.parse("lp")


class TestSymbolicEqual:
    def test_syntactic(self):
        a = IneqSystem(["R1"], [LinIneq({"R1": 2}, H("X") * 2)])
        b = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("X"))])
        verdict = polyhedra.symbolic_equal(a, b)
        assert verdict.equal and verdict.syntactic

    def test_one_sided(self):
        a = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("A"), "tight")])
        b = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("A,B"), "loose")])
        verdict = polyhedra.symbolic_equal(a, b)
        assert not verdict
        assert verdict.side == "left" and verdict.witness.tag == "tight"
        assert verdict.left_within_right and not verdict.right_within_left
        farkas = polyhedra.symbolic_equal(a, b, RedundancyMode.FARKAS)
        assert not farkas.left_within_right

    def test_rate_variables_differ(self):
        a = IneqSystem(["R1"], [LinIneq({"R1": 1}, 1)])
        b = IneqSystem(["R2"], [LinIneq({"R2": 1}, 1)])
        with pytest.raises(PolyhedraException):
            polyhedra.symbolic_equal(a, b)


class TestNumericRegion:
    def mac(self):
        return IneqSystem(
            ["R1", "R2"],
            [
                LinIneq({"R1": 1}, mutual_info_expr("X1", "Y1", "X2"), "r1"),
                LinIneq({"R2": 1}, mutual_info_expr("X2", "Y1", "X1"), "r2"),
                LinIneq({"R1": 1, "R2": 1}, mutual_info_expr("X1,X2", "Y1"), "sum"),
            ],
        )

    def test_vertices(self):
        region = polyhedra.numeric_region(self.mac(), common.xor_joint())
        verts = {tuple(round(x, 9) for x in v) for v in region.vertices}
        assert verts == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}
        assert region.max_rate("R1") == pytest.approx(1.0)
        value, point = region.support((1, 1))
        assert value == pytest.approx(1.0)
        assert region.contains((0.5, 0.5))
        assert not region.contains((0.6, 0.6))

    def test_valuation(self):
        s = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("X"))])
        region = polyhedra.numeric_region(s, valuation={EntropyAtom("X"): 0.25})
        assert region.max_rate("R1") == pytest.approx(0.25)
        with pytest.raises(PolyhedraException):
            polyhedra.numeric_region(s, valuation={})

    def test_assumption_warning(self):
        s = IneqSystem(
            ["R1"], [LinIneq({"R1": 1}, H("X1"))], [LinIneq({}, H("X1") - 2, "needs2bits")]
        )
        joint = common.xor_joint()
        flagged = polyhedra.numeric_region(s, joint, enforce_assumptions=False)
        assert [w.tag for w in flagged.warnings] == ["needs2bits"]
        assert flagged.warnings[0].value == pytest.approx(-1.0)
        assert not flagged.is_empty
        enforced = polyhedra.numeric_region(s, joint, enforce_assumptions=True)
        assert enforced.is_empty
        assert enforced.support((1,))[0] == float("-inf")

    def test_clamp_negative(self):
        s = IneqSystem(["R1"], [LinIneq({"R1": 1}, H("X1") - 2, "short")])
        joint = common.xor_joint()
        assert polyhedra.numeric_region(s, joint).is_empty
        clamped = polyhedra.numeric_region(s, joint, clamp_negative=True)
        assert clamped.vertices == [(0.0,)]
        assert clamped.warnings[0].kind == "clamped"

    def test_same_as_and_project(self):
        joint = common.xor_joint()
        a = polyhedra.numeric_region(self.mac(), joint)
        b = polyhedra.numeric_region(self.mac(), joint)
        assert a.same_as(b)
        projected = {tuple(round(x, 9) for x in p) for p in a.project(["R1", "R2"])}
        assert projected == {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)}

    def test_extreme_points_2d(self):
        points = [(0, 0), (1, 0), (0, 1), (1, 1), (0.5, 0.5), (1, 1)]
        hull = polyhedra.extreme_points_2d(points)
        assert sorted(hull) == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]
