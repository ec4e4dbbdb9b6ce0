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

import common
import numpy as np
import pytest

from wiretaplib import dist_core
from wiretaplib.dist_core import (
    DistributionException,
    Factor,
    FactorizationSpec,
    FactorizationTemplate,
    JointPmf,
    SwitchChannelParams,
    UndefinedConditionalException,
    VariableSpec,
)


class TestJointPmf:
    def test_variables_sorted(self):
        joint = JointPmf(
            [VariableSpec("Y", 2), VariableSpec("X", 3)],
            np.arange(6, dtype=float) / 15,
        )
        assert joint.names == ("X", "Y")
        # entry (y=1, x=2) moves to (x=2, y=1)
        assert joint.tensor[2, 1] == pytest.approx(5 / 15)

    def test_rejects_invalid_tables(self):
        with pytest.raises(DistributionException):
            JointPmf([VariableSpec("X", 2)], [0.5, 0.6])
        with pytest.raises(DistributionException):
            JointPmf([VariableSpec("X", 2)], [1.5, -0.5])
        with pytest.raises(DistributionException):
            JointPmf([VariableSpec("X", 2)], [1.0])
        with pytest.raises(DistributionException):
            JointPmf([VariableSpec("X", 2), VariableSpec("X", 2)], np.full(4, 0.25))

    def test_variable_spec(self):
        assert VariableSpec.from_json("U0:3") == VariableSpec("U0", 3)
        assert VariableSpec.from_json({"name": "Z", "cardinality": 2}).cardinality == 2
        with pytest.raises(DistributionException):
            VariableSpec.from_json("U0")
        with pytest.raises(DistributionException):
            VariableSpec("U0", 0)

    def test_marginal_and_conditional(self):
        joint = common.xor_joint()
        m = joint.marginal_tensor(["Y1", "X1"])
        assert m.shape == (2, 2)
        assert np.allclose(m, 0.25)

        cond = joint.conditional(["Y1"], ["X1", "X2"])
        assert cond.given_names == ("X1", "X2")
        assert cond.table[1, 1, 0] == pytest.approx(1.0)
        assert cond.table[1, 0, 1] == pytest.approx(1.0)

    def test_conditional_on_zero_event(self):
        joint = JointPmf(
            [VariableSpec("X", 2), VariableSpec("Y", 2)], [0.5, 0.5, 0.0, 0.0]
        )
        with pytest.raises(UndefinedConditionalException):
            joint.conditional(["Y"], ["X"])
        cond = joint.conditional(["Y"], ["X"], undefined="uniform")
        assert np.allclose(cond.table[1], [0.5, 0.5])

    def test_json_round_trip(self):
        joint = common.random_joint(["X", "Y|X"], {"X": 3, "Y": 2}, seed=4)
        again = JointPmf.from_json(joint.to_json())
        assert again.allclose(joint)


class TestFactors:
    def test_normalization(self):
        with pytest.raises(DistributionException):
            Factor([VariableSpec("Y", 2)], [VariableSpec("X", 2)], [[0.5, 0.5], [0.2, 0.2]])

    def test_order_is_checked(self):
        y = Factor([VariableSpec("Y", 2)], [VariableSpec("X", 2)], np.eye(2))
        with pytest.raises(DistributionException):
            FactorizationSpec([y, common.uniform("X")])
        with pytest.raises(DistributionException):
            FactorizationSpec([common.uniform("X"), common.uniform("X")])

    def test_conflicting_cardinalities(self):
        y = Factor([VariableSpec("Y", 2)], [VariableSpec("X", 3)], np.full((3, 2), 0.5))
        with pytest.raises(DistributionException):
            FactorizationSpec([common.uniform("X", 2), y])

    def test_compose_joint(self):
        joint = common.joint_of(common.uniform("X"), common.copy_of("Y", "X"))
        assert np.allclose(joint.tensor, [[0.5, 0.0], [0.0, 0.5]])

    def test_spec_json(self):
        spec = common.noiseless_mac_channel()
        again = FactorizationSpec.from_json(spec.to_json())
        assert dist_core.compose_joint(again).allclose(dist_core.compose_joint(spec))


class TestTemplate:
    def test_parse(self):
        t = FactorizationTemplate.parse(["Q", "U0|Q", "U1,U2|U0"])
        assert t.variables == ("Q", "U0", "U1", "U2")
        assert str(t) == "p(Q)p(U0|Q)p(U1,U2|U0)"

    def test_substitute_collapses(self):
        t = FactorizationTemplate.parse(["Q", "U0|Q", "X1|U0"])
        assert str(t.substitute({"U0": ("X1",), "Q": ()})) == "p(X1)"

    def test_residual(self):
        joint = common.xor_joint()
        member = FactorizationTemplate.parse(["U0", "V0", "X1|U0", "X2|V0"])
        assert dist_core.factorization_residual(joint, member) < common.ATOL
        # Y1 depends on both inputs
        other = FactorizationTemplate.parse(["X1", "X2", "Y1|X1"])
        assert dist_core.factorization_residual(joint, other) > 0.1

    def test_sample_is_seeded(self):
        t = FactorizationTemplate.parse(["X", "Y|X"])
        cards = {"X": 3, "Y": 2}
        a = dist_core.compose_joint(t.sample(cards, np.random.default_rng(7)))
        b = dist_core.compose_joint(t.sample(cards, np.random.default_rng(7)))
        assert a.allclose(b)
        assert dist_core.factorization_residual(a, t) < common.ATOL

    def test_sample_needs_cardinalities(self):
        t = FactorizationTemplate.parse(["X", "Y|X"])
        with pytest.raises(DistributionException):
            t.sample({"X": 2}, np.random.default_rng(0))


class TestRandomTable:
    def test_rows_are_stochastic(self):
        table = dist_core.random_table(np.random.default_rng(3), 4, 3)
        assert table.shape == (4, 3)
        assert np.allclose(table.sum(axis=1), 1)
        assert np.all(table > 0)

    def test_vertex_rows(self):
        table = dist_core.random_table(np.random.default_rng(3), 5, 3, vertex_mix=1.0)
        assert table.shape == (5, 3)
        assert np.all(np.isin(table, (0.0, 1.0)))
        assert np.all(table.sum(axis=1) == 1)

    def test_mix_gives_both_kinds(self):
        rng = np.random.default_rng(11)
        tables = [dist_core.random_table(rng, 2, 2, vertex_mix=0.5) for _ in range(40)]
        deterministic = sum(bool(np.all(np.isin(t, (0.0, 1.0)))) for t in tables)
        assert 0 < deterministic < 40


class TestSwitchChannels:
    def test_noiseless_switch(self):
        spec = dist_core.build_noiseless_switch(SwitchChannelParams(0.7, 0.3))
        joint = dist_core.compose_joint(spec)
        assert joint.marginal_tensor(["S1"])[0] == pytest.approx(0.7)
        assert joint.marginal_tensor(["S2"])[0] == pytest.approx(0.3)
        y = joint.marginal_tensor(["Y1", "Y2"])
        assert np.allclose(y, np.diag(np.diag(y)))
        # with S1 = 0, Y1 = X1
        m = joint.marginal_tensor(["S1", "X1", "Y1"])
        assert m[0, 0, 1] == pytest.approx(0.0)

    def test_noiseless_switch_needs_tau2(self):
        with pytest.raises(DistributionException):
            dist_core.build_noiseless_switch(SwitchChannelParams(0.7))

    def test_degraded_switch(self):
        bsc = [[0.9, 0.1], [0.1, 0.9]]
        spec = dist_core.build_degraded_switch(SwitchChannelParams(0.4), z_given_y2=bsc)
        joint = dist_core.compose_joint(spec)
        assert set(joint.names) == {"X1", "X2", "S", "Y1", "Y2", "Z"}
        m = joint.marginal_tensor(["S", "X2", "Y1"])
        assert m[1, 0, 1] == pytest.approx(0.0)
        assert joint.marginal_tensor(["S"])[0] == pytest.approx(0.4)

    def test_invalid_params(self):
        with pytest.raises(DistributionException):
            SwitchChannelParams(1.5)
        with pytest.raises(DistributionException):
            SwitchChannelParams(0.5, branches={"y3|x1": np.eye(2)})
