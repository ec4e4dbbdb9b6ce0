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

from wiretaplib import codebook_sim
from wiretaplib.codebook_sim import (
    BinningConfig,
    Lemma1Config,
    SimulationException,
    typicality,
)
from wiretaplib.codebook_sim import counting


def _satisfied(n, **kwargs):
    return Lemma1Config(
        n=n,
        joint=common.lemma1_joint(),
        S=0.5,
        T=1.3,
        epsilon=1.0,
        delta1=0.1,
        delta=0.3,
        **kwargs
    )


def _violated(n, **kwargs):
    return Lemma1Config(
        n=n,
        joint=common.lemma1_joint(),
        S=0.5,
        T=0.9,
        epsilon=1.0,
        delta1=0.1,
        delta=0.05,
        **kwargs
    )


class TestTypicality:
    def test_type_counts(self):
        counts = typicality.type_counts(np.array([[0, 1, 1], [2, 2, 2]]), 3)
        assert counts.tolist() == [[1, 2, 0], [0, 0, 3]]

    def test_zero_probability_symbol(self):
        probs = np.array([0.5, 0.5, 0.0])
        counts = np.array([[2, 2, 0], [2, 1, 1]])
        assert typicality.typical_mask(counts, probs, 0.5).tolist() == [True, False]

    def test_strongly_typical(self):
        table = np.array([[0.5, 0.0], [0.0, 0.5]])
        x = np.array([0, 1, 0, 1])
        assert typicality.is_strongly_typical([x, x], table, 0.1)
        assert not typicality.is_strongly_typical([x, 1 - x], table, 0.1)
        assert not typicality.is_strongly_typical([np.zeros(4, dtype=int)] * 2, table, 0.1)

    def test_sample_conditional(self):
        rows = np.array([[1.0, 0.0], [0.0, 1.0]])
        draws = typicality.sample_conditional(
            np.random.default_rng(0), rows, np.array([0, 1, 1, 0]), copies=3
        )
        assert draws.shape == (3, 4)
        assert (draws == [0, 1, 1, 0]).all()


class TestLemma1:
    def test_regimes(self):
        cfg = _satisfied(8)
        assert cfg.regime() == "satisfied"
        info = cfg.information()
        assert info["u1"] == pytest.approx(0.0, abs=common.ATOL)
        assert info["v1"] == pytest.approx(1.0)
        assert info["joint"] == pytest.approx(1.0)
        assert _violated(8).regime() == "violated"

    def test_satisfied_rates(self):
        results = codebook_sim.sweep_lemma1(_satisfied(8, trials=10), [8, 10, 12, 14])
        assert [r.n for r in results] == [8, 10, 12, 14]
        assert all(r.p_e1 == 0.0 for r in results)
        assert results[2].exceed_fraction <= 0.05

    def test_violated_rates(self):
        result = codebook_sim.run_lemma1_counting(_violated(14, trials=10))
        assert result.regime == "violated"
        assert result.p_e1 >= 0.5

    def test_count_at_threshold_is_not_an_error(self):
        counts = np.array([4, 5, 3, 8])
        assert counting._exceeding(counts, 4.0) == 0.5
        assert counting._exceeding(np.zeros(0, dtype=np.int64), 1.0) == 0.0

    def test_zero_rates(self):
        cfg = Lemma1Config(n=6, joint=common.lemma1_joint(), S=0, T=0, trials=5)
        assert codebook_sim.estimate_entropy_LK(cfg) == 0.0

    def test_seeded(self):
        a = codebook_sim.run_lemma1_counting(_satisfied(8, trials=4, seed=9))
        b = codebook_sim.run_lemma1_counting(_satisfied(8, trials=4, seed=9))
        assert a.counts == b.counts

    def test_progress_callback(self):
        seen = []
        codebook_sim.run_lemma1_counting(
            _satisfied(6, trials=3), on_trial=lambda done, total: seen.append((done, total))
        )
        assert seen == [(1, 3), (2, 3), (3, 3)]

    def test_pair_limit(self):
        with pytest.raises(SimulationException):
            codebook_sim.run_lemma1_counting(_satisfied(14, max_pairs=2 ** 10))

    def test_invalid_config(self):
        with pytest.raises(SimulationException):
            Lemma1Config(n=4, joint=common.bsc_joint(0.1), S=0.5, T=0.5)
        with pytest.raises(SimulationException):
            Lemma1Config(n=0, joint=common.lemma1_joint(), S=0.5, T=0.5)
        with pytest.raises(SimulationException):
            Lemma1Config.from_json({"n": 4, "S": 0.5, "T": 0.5})
        with pytest.raises(SimulationException):
            Lemma1Config.from_json({"n": 4, "S": 0.5, "T": 0.5, "joint": {}, "rate": 1})

    def test_json(self):
        cfg = _satisfied(8)
        again = Lemma1Config.from_json(cfg.to_json())
        assert again.joint.allclose(cfg.joint)
        assert again.with_n(8) == again

    def test_csv_rows(self):
        result = codebook_sim.run_lemma1_counting(_satisfied(6, trials=2))
        rows = codebook_sim.lemma1_csv_rows([result])
        assert len(rows) == 6
        assert rows[0] == (6, "p_e1", 0.0, 2)


class TestBinning:
    def test_hidden_source_vanishes(self):
        cfg = BinningConfig(n=4, joint=common.hidden_joint(), R=0.5)
        trace = codebook_sim.run_osrb_tv(cfg, range(4, 15))
        assert trace.regime == "secure"
        assert trace.trend() <= -0.8

    def test_leaky_source_stays(self):
        cfg = BinningConfig(n=14, joint=common.bsc_joint(0.05), R=0.6)
        trace = codebook_sim.run_osrb_tv(cfg)
        assert trace.regime == "insecure"
        assert trace.values[0] >= 0.1

    def test_single_bin(self):
        cfg = BinningConfig(n=6, joint=common.bsc_joint(0.2), R=0.0, trials=3)
        assert np.all(codebook_sim.binning_tv(cfg) == 0.0)

    def test_secure_rate(self):
        cfg = BinningConfig(n=4, joint=common.hidden_joint(), R=0.5)
        assert cfg.secure_rate() == pytest.approx(1.0)

    def test_csv_rows(self):
        cfg = BinningConfig(n=4, joint=common.hidden_joint(), R=0.5, trials=2)
        trace = codebook_sim.run_osrb_tv(cfg, [4, 5])
        rows = trace.csv_rows()
        assert [r[:2] for r in rows] == [(4, "tv"), (4, "tv_std"), (5, "tv"), (5, "tv_std")]
        assert trace.to_json()["ns"] == [4, 5]

    def test_enumeration_limit(self):
        with pytest.raises(SimulationException):
            codebook_sim.binning_tv(BinningConfig(n=30, joint=common.hidden_joint(), R=0.5))

    def test_invalid_config(self):
        with pytest.raises(SimulationException):
            BinningConfig(n=4, joint=common.hidden_joint(), R=-0.1)
        with pytest.raises(SimulationException):
            BinningConfig(n=4, joint=common.hidden_joint(), R=0.5, observer="Y")
        with pytest.raises(SimulationException):
            BinningConfig.from_json({"n": 4, "R": 0.5})
