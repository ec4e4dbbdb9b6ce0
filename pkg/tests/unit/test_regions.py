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
import numpy as np
import pytest

from wiretaplib import polyhedra, regions
from wiretaplib.dist_core import (
    Factor,
    FactorizationSpec,
    FactorizationTemplate,
    SwitchChannelParams,
    build_noiseless_switch,
    compose_joint,
    marginalize,
)
from wiretaplib.info_measures import eval_expr
from wiretaplib.regions import (
    AuxSearchConfig,
    EnvelopePoint,
    RegionEnvelope,
    RegionException,
    RegionId,
)

THM5_PARAMS = {"tau1": "7/10", "tau2": "3/10"}

WEAK_AUXILIARIES = ["Q", "U0|Q", "U1,U2|U0", "V0|Q", "V1,V2|V0", "X1|U0,U1,U2", "X2|V0,V1,V2"]
STRONG_AUXILIARIES = ["Q", "U0,U1,U2|Q", "V0,V1,V2|Q", "X1|U0,U1,U2", "X2|V0,V1,V2"]


def _family_joint(shapes, seed, private=2, q=1):
    """Random auxiliaries with U2 and V2 of cardinality `private`; both
    receivers see (X1, X2), the eavesdropper sees X1 through a binary
    symmetric channel."""
    cards = {"Q": q, "U0": 2, "U1": 2, "U2": private, "V0": 2, "V1": 2, "V2": private}
    cards.update(X1=2, X2=2)
    aux = FactorizationTemplate.parse(shapes).sample(cards, np.random.default_rng(seed))
    x1, x2 = common.var("X1"), common.var("X2")
    channel = [
        Factor.deterministic([common.var("Y1", 4)], [x1, x2], lambda a, b: 2 * a + b),
        common.copy_of("Y2", "Y1", card=4),
        Factor([common.var("Z")], [x1], np.array([[0.8, 0.2], [0.2, 0.8]])),
    ]
    return compose_joint(FactorizationSpec(list(aux.factors) + channel))


def _noiseless_switch_joint():
    return compose_joint(build_noiseless_switch(SwitchChannelParams(0.7, 0.3)))


class TestBuiltins:
    def test_ids(self):
        assert set(regions.builtin_ids()) == {r.value for r in RegionId}

    def test_parse(self):
        assert RegionId.parse(" thm1_inner") is RegionId.THM1_INNER
        assert RegionId.parse(RegionId.APPC_RAW) is RegionId.APPC_RAW
        assert regions.builtin_system(RegionId.THM8_MACWT).id is RegionId.THM8_MACWT
        with pytest.raises(RegionException):
            RegionId.parse("THM9")

    def test_fresh_specs(self):
        for name in regions.builtin_ids():
            spec = regions.builtin_system(name)
            assert spec.id.value == name
            assert set(spec.kept_rates) >= {"R1", "R2"}
            if spec.kind == "raw":
                assert spec.eliminate

    def test_noiseless_switch_params(self):
        spec = regions.builtin_system("THM5_NOISELESS_SWITCH", **THM5_PARAMS)
        assert spec.params == {"tau1": Fraction(7, 10), "tau2": Fraction(3, 10)}
        assert [i.tag for i in spec.system] == ["r1.active", "r2.silent"]
        with pytest.raises(RegionException):
            regions.builtin_system("THM5_NOISELESS_SWITCH", tau1="3/2")

    def test_weak_inner_has_covering_assumption(self):
        spec = regions.builtin_system(RegionId.THM1_INNER)
        assert [a.tag for a in spec.assumptions] == ["covering"]


class TestEvaluate:
    def test_noiseless_switch_capacity(self):
        ev = regions.evaluate(
            "THM5_NOISELESS_SWITCH", _noiseless_switch_joint(), params=THM5_PARAMS
        )
        assert not ev.flagged
        assert ev.region.max_rate("R1") == pytest.approx(0.4)
        assert ev.region.max_rate("R2") == pytest.approx(0.0, abs=common.ATOL)
        assert ev.to_json()["region"] == "THM5_NOISELESS_SWITCH"

    def test_degraded_bounds_counterexample(self):
        # independent auxiliaries, xor output: the outer bound sees nothing
        joint = common.xor_joint()
        inner = regions.evaluate(RegionId.COR1_DEGRADED_INNER, joint)
        outer = regions.evaluate(RegionId.THM2_OUTER_DEGRADED, joint)
        assert inner.region.max_rate("R1") == pytest.approx(1.0)
        assert outer.region.max_rate("R1") == pytest.approx(0.0, abs=common.ATOL)

    def test_correlated_auxiliaries(self):
        joint = common.correlated_xor_joint()
        outer = regions.evaluate(RegionId.THM2_OUTER_DEGRADED, joint)
        assert outer.region.max_rate("R1") == pytest.approx(1.0)
        with pytest.raises(RegionException):
            regions.evaluate(RegionId.COR1_DEGRADED_INNER, joint)

    def test_missing_variable(self):
        with pytest.raises(RegionException):
            regions.evaluate(RegionId.THM1_INNER, common.hidden_joint())

    def test_substitution(self):
        joint = common.xor_joint()
        ev = regions.evaluate(
            RegionId.COR1_DEGRADED_INNER,
            marginalize(joint, ["X1", "X2", "Y1", "Y2", "Z"]),
            substitution={"U0": ("X1",), "V0": ("X2",)},
        )
        assert ev.mapping["U0"] == ("X1",)
        assert ev.region.max_rate("R2") == pytest.approx(1.0)


class TestDerive:
    def test_macwt_projection_is_tighter(self):
        derivation = regions.derive_from_raw(RegionId.APPB_RAW)
        assert derivation.published is RegionId.THM8_MACWT
        assert set(derivation.system.rate_vars) == {"R1", "Rd1", "R2", "Rd2"}
        verdict = derivation.verdict
        assert not verdict.equal
        assert verdict.side == "left"
        assert verdict.left_within_right
        assert derivation.to_json()["count"] == derivation.count

    def test_nothing_to_eliminate(self):
        with pytest.raises(RegionException):
            regions.derive_from_raw(RegionId.THM1_INNER)


class TestRemark:
    def test_slack_is_conditional_mi(self):
        for check in regions.sample_remark2(samples=1000, seed=3):
            assert check.slack == pytest.approx(-check.conditional_mi, abs=common.LOOSE)
            assert check.implication_holds

    def test_missing_variables(self):
        with pytest.raises(RegionException):
            regions.check_remark2(common.xor_joint())


class TestReductions:
    def _same(self, reduction, joint):
        thm1 = regions.builtin_system(RegionId.THM1_INNER).system
        reduced = regions.reduce_system(thm1, reduction).substitute({"Q": ()})
        reference = regions.reference_region(reduction).substitute({"Q": ()})
        a = polyhedra.numeric_region(reduced, joint, enforce_assumptions=False)
        b = polyhedra.numeric_region(reference, joint)
        return a.same_as(b, tol=common.LOOSE)

    def test_compound_mac(self):
        for seed in range(100):
            joint = common.random_joint(
                ["X1", "X2", "Y1,Y2|X1,X2"], {"X1": 2, "X2": 2, "Y1": 2, "Y2": 2}, seed=seed
            )
            assert self._same("compound_mac", joint), seed

    def test_mac_wiretap(self):
        for seed in range(100):
            joint = common.random_joint(
                ["X1", "X2", "Y1,Z|X1,X2"], {"X1": 2, "X2": 2, "Y1": 3, "Z": 2}, seed=seed
            )
            assert self._same("mac_wiretap", joint), seed

    def test_broadcast_confidential(self):
        thm1 = regions.builtin_system(RegionId.THM1_INNER).system
        reduced = regions.reduce_system(thm1, "broadcast_confidential").substitute({"Q": ()})
        for seed in range(100):
            joint = common.random_joint(
                ["U0", "X1|U0", "Y1,Z|X1"], {"U0": 2, "X1": 2, "Y1": 2, "Z": 2}, seed=seed
            )
            region = polyhedra.numeric_region(reduced, joint, enforce_assumptions=False)
            assert region.max_rate("R2") <= common.ATOL, seed

    def test_template(self):
        template = regions.reduction_template(RegionId.THM1_INNER, "compound_mac")
        assert not {"U0", "V0", "Z"} & set(template.variables)

    def test_unknown(self):
        with pytest.raises(RegionException):
            regions.reference_region("relay")


class TestWeakSecrecyDerivation:
    @pytest.fixture(scope="class")
    def derivation(self):
        return regions.derive_from_raw(RegionId.APPC_RAW)

    def test_projects_onto_message_rates(self, derivation):
        assert derivation.system.rate_vars == ("R1", "R2")
        assert derivation.published is RegionId.THM1_INNER
        assert derivation.verdict is not None
        assert derivation.system.assumptions

    def test_covering_condition_emerges(self, derivation):
        template = regions.builtin_system(RegionId.APPC_RAW).template
        joints = regions.screening_joints(template, count=8, seed=5)
        covering = np.array([eval_expr(regions.remark_assumption().constant, j) for j in joints])
        assert np.abs(covering).max() > 1e-6

        def proportional(assumption):
            values = np.array([eval_expr(assumption.constant, j) for j in joints])
            scale = values @ covering / (covering @ covering)
            return scale > 0 and np.abs(values - scale * covering).max() < 1e-9

        assert any(proportional(a) for a in derivation.system.assumptions)

    def test_within_published_region(self, derivation):
        template = regions.builtin_system(RegionId.APPC_RAW).template
        thm1 = regions.builtin_system(RegionId.THM1_INNER).system
        for joint in regions.screening_joints(template, count=20, seed=13):
            derived = polyhedra.numeric_region(derivation.system, joint)
            published = polyhedra.numeric_region(thm1, joint, enforce_assumptions=False)
            assert all(published.contains(v, tol=1e-8) for v in derived.vertices)

    def test_equal_without_private_splits(self, derivation):
        thm1 = regions.builtin_system(RegionId.THM1_INNER).system
        for seed in range(10):
            joint = _family_joint(WEAK_AUXILIARIES, seed, private=1, q=2)
            derived = polyhedra.numeric_region(derivation.system, joint, enforce_assumptions=False)
            published = polyhedra.numeric_region(thm1, joint, enforce_assumptions=False)
            assert derived.same_as(published, tol=1e-8), seed


class TestStrongSecrecyReduction:
    @pytest.fixture(scope="class")
    def reduced(self):
        return regions.derive_from_raw(RegionId.THM7_STRONG_REDUCED, compare=False).system

    def _regions(self, reduced, joint):
        thm1 = regions.builtin_system(RegionId.THM1_INNER).system
        strong = polyhedra.numeric_region(reduced, joint, enforce_assumptions=False)
        weak = polyhedra.numeric_region(thm1, joint, enforce_assumptions=False)
        return strong, weak

    def test_equal_when_covering_holds(self, reduced):
        for seed in range(100):
            joint = _family_joint(STRONG_AUXILIARIES, seed, private=1)
            assert regions.check_remark2(joint).holds
            strong, weak = self._regions(reduced, joint)
            assert strong.same_as(weak, tol=1e-8), seed

    def test_contains_weak_region_otherwise(self, reduced):
        violated = 0
        for seed in range(100):
            joint = _family_joint(STRONG_AUXILIARIES, seed)
            if regions.check_remark2(joint).holds:
                continue
            violated += 1
            strong, weak = self._regions(reduced, joint)
            assert all(strong.contains(v, tol=1e-8) for v in weak.vertices), seed
        assert violated


class TestSearch:
    def test_grid_is_exhaustive(self):
        config = AuxSearchConfig(
            samples=729,
            sampler="grid",
            grid_steps=2,
            cardinalities={"Q": 1, "U0": 2, "V0": 2, "U1": 1, "U2": 1, "V1": 1, "V2": 1},
            directions=[(1, 1)],
        )
        env = regions.search_envelope("THM1_INNER", common.noiseless_mac_channel(), config)
        assert env.evaluated == 729
        assert env.support((1, 1)) >= 2 - common.ATOL

    def test_seeded(self):
        config = AuxSearchConfig(samples=40, seed=4, refinement_passes=0)
        a = regions.search_envelope("THM1_INNER", common.noiseless_mac_channel(), config)
        b = regions.search_envelope("THM1_INNER", common.noiseless_mac_channel(), config)
        assert a.points
        assert a.excluded < a.evaluated
        assert [p.rates for p in a.points] == [p.rates for p in b.points]

    def test_generic_laws_violate_covering(self):
        # without deterministic factors the covering slack is negative
        config = AuxSearchConfig(samples=20, seed=2, vertex_mix=0.0, refinement_passes=0)
        env = regions.search_envelope("THM1_INNER", common.noiseless_mac_channel(), config)
        assert env.excluded == env.evaluated == 20
        assert not env.points

    def test_invalid_vertex_mix(self):
        with pytest.raises(RegionException):
            AuxSearchConfig(vertex_mix=1.5)

    def test_noiseless_switch(self):
        channel = build_noiseless_switch(SwitchChannelParams(0.7, 0.3))
        config = AuxSearchConfig(samples=2000, refinement_passes=3, directions=[(1, 0)])
        env = regions.search_envelope("THM1_INNER", channel, config)
        assert env.support((1, 0)) >= 0.38
        for p in env.points:
            assert p.rates[0] <= 0.4 + common.ATOL
            assert p.rates[1] <= common.ATOL

    def test_undefined_outputs(self):
        # the multiple access wiretap region observes Y, not Y1 and Y2
        with pytest.raises(RegionException):
            regions.search_envelope(
                "THM8_MACWT", common.noiseless_mac_channel(), AuxSearchConfig(samples=1)
            )


class TestEnvelope:
    def test_pareto_and_convexify(self):
        env = RegionEnvelope.from_vertices(
            RegionId.THM1_INNER, [(1, 0), (0.4, 0.4), (0, 1), (0.2, 0.2)]
        )
        assert [p.rates for p in env.points] == [(0.0, 1.0), (0.4, 0.4), (1.0, 0.0)]
        hull = env.convexify()
        assert hull.convexified
        assert sorted(p.rates for p in hull.points) == [(0.0, 1.0), (1.0, 0.0)]
        assert env.csv_rows()[0] == ["lambda1", "lambda2", "R1", "R2"]
        assert env.csv_rows()[1] == ["", "", 0.0, 1.0]

    def test_csv_rows_carry_directions(self):
        env = RegionEnvelope(
            RegionId.THM1_INNER,
            [EnvelopePoint((0.5, 0.25), ((1.0, 0.0), (0.75, 0.25)))],
        )
        assert env.csv_rows()[1:] == [[1.0, 0.0, 0.5, 0.25], [0.75, 0.25, 0.5, 0.25]]

    def test_default_refinement(self):
        assert AuxSearchConfig().refinement_passes == 3

    def test_json(self):
        env = RegionEnvelope(
            RegionId.THM1_INNER,
            [EnvelopePoint((0.5, 0.25), ((1.0, 0.0),))],
            config=AuxSearchConfig(samples=3),
        )
        again = RegionEnvelope.from_json(env.to_json())
        assert again.points == env.points and again.config.samples == 3
        with pytest.raises(RegionException):
            RegionEnvelope.from_json({"region": "THM1_INNER"})

    def test_empty_support(self):
        env = RegionEnvelope(RegionId.THM1_INNER, [])
        assert env.support((1, 1)) == float("-inf")
        assert env.best((1, 1)) is None

    def test_search_config(self):
        with pytest.raises(RegionException):
            AuxSearchConfig(sampler="lattice")
        with pytest.raises(RegionException):
            AuxSearchConfig(directions=[(-1, 1)])
        with pytest.raises(RegionException):
            AuxSearchConfig.from_json({"samples": 3, "speed": 1})
        config = AuxSearchConfig.from_json({"directions": [[1, 0]]})
        assert config.directions == ((1.0, 0.0),)
        assert config.cardinality("Q") == 1 and config.cardinality("U0") == 2


class TestBounds:
    def test_contained(self):
        inner = RegionEnvelope.from_vertices(RegionId.COR1_DEGRADED_INNER, [(1, 0), (0, 1)])
        outer = RegionEnvelope.from_vertices(RegionId.THM2_OUTER_DEGRADED, [(1, 1)])
        report = regions.compare_bounds(inner, outer)
        assert report.contained
        assert len(report.gaps) == 9
        assert all(gap >= -common.ATOL for _, gap in report.gaps)

    def test_violated(self):
        inner = RegionEnvelope.from_vertices(RegionId.COR1_DEGRADED_INNER, [(1, 1)])
        outer = RegionEnvelope.from_vertices(RegionId.THM2_OUTER_DEGRADED, [(1, 0), (0, 1)])
        report = regions.compare_bounds(inner, outer)
        assert not report.contained
        assert report.max_violation == pytest.approx(0.5)
        assert report.worst_point == (1.0, 1.0)

    def test_empty_outer(self):
        inner = RegionEnvelope.from_vertices(RegionId.COR1_DEGRADED_INNER, [(1, 1)])
        with pytest.raises(RegionException):
            regions.compare_bounds(inner, RegionEnvelope(RegionId.THM2_OUTER_DEGRADED, []))
