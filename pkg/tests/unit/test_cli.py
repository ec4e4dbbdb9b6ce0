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

import json
import os.path as op

import common

from wiretaplib import cli
from wiretaplib.dist_core import Factor
from wiretaplib.regions import RegionEnvelope, RegionId


def _write(tmp_path, name, content):
    path = op.join(str(tmp_path), name)
    with open(path, "w") as fp:
        fp.write(content if isinstance(content, str) else json.dumps(content))
    return path


def _leaky_joint():
    """U1 and V2 independent, each revealed by Z only jointly with the other."""
    x1, x2 = common.var("X1"), common.var("X2")
    return common.joint_of(
        common.const("Q"),
        common.const("U0"),
        common.const("V0"),
        common.uniform("U1"),
        common.const("U2"),
        common.const("V1"),
        common.uniform("V2"),
        common.copy_of("X1", "U1"),
        common.copy_of("X2", "V2"),
        Factor.deterministic([common.var("Y1", 4)], [x1, x2], lambda a, b: 2 * a + b),
        common.copy_of("Y2", "Y1", card=4),
        Factor.deterministic([common.var("Z")], [x1, x2], lambda a, b: a ^ b),
    )


class TestParser:
    def test_version(self, capsys):
        assert cli.main(["--version"]) == cli.EXIT_OK

    def test_usage_error(self, capsys):
        assert cli.main(["derive"]) == cli.EXIT_ERROR
        assert cli.main(["nonsense"]) == cli.EXIT_ERROR
        assert cli.main([]) == cli.EXIT_ERROR


class TestBuiltin:
    def test_list(self, capsys):
        assert cli.main(["builtin", "--list"]) == cli.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in lines] == [r.value for r in RegionId]

    def test_emit(self, capsys, tmp_path):
        out = op.join(str(tmp_path), "thm5.json")
        code = cli.main(
            [
                "builtin",
                "--emit",
                "THM5_NOISELESS_SWITCH",
                "--param",
                "tau1=1/2",
                "--param",
                "tau2=1/2",
                "--out",
                out,
            ]
        )
        assert code == cli.EXIT_OK
        text = capsys.readouterr().out
        assert "r1.silent: R1 <= 0" in text
        assert "r2.silent: R2 <= 0" in text
        with open(out) as fp:
            assert json.load(fp)["params"] == {"tau1": "1/2", "tau2": "1/2"}

    def test_bad_param(self, capsys):
        code = cli.main(["builtin", "--emit", "THM5_NOISELESS_SWITCH", "--param", "tau1"])
        assert code == cli.EXIT_ERROR
        assert "error:" in capsys.readouterr().err


class TestParse:
    def test_parse(self, capsys, tmp_path):
        path = _write(tmp_path, "mac.txt", "R1 + R2 <= H(X1,X2)\nR1 >= 0\n")
        out = op.join(str(tmp_path), "mac.json")
        assert cli.main(["parse", "--file", path, "--out", out]) == cli.EXIT_OK
        assert "-R1 <= 0" in capsys.readouterr().out
        assert op.isfile(out)

    def test_missing_file(self, capsys, tmp_path):
        code = cli.main(["parse", "--file", op.join(str(tmp_path), "missing.txt")])
        assert code == cli.EXIT_ERROR
        assert "No such file" in capsys.readouterr().err

    def test_syntax_error(self, capsys, tmp_path):
        path = _write(tmp_path, "bad.txt", "R1 <= I(X;X)\n")
        assert cli.main(["parse", "--file", path]) == cli.EXIT_ERROR
        assert "column 11" in capsys.readouterr().err


class TestDerive:
    def test_system_file(self, capsys, tmp_path):
        path = _write(tmp_path, "raw.txt", "R1 + Ra <= H(X)\nRa >= 0\nR1 >= 0\n")
        target = _write(tmp_path, "target.txt", "R1 <= H(X)\nR1 >= 0\n")
        out = op.join(str(tmp_path), "derived.json")
        code = cli.main(
            ["derive", "--raw", path, "--eliminate", "Ra", "--target", target, "--out", out]
        )
        assert code == cli.EXIT_OK
        assert "# equal to" in capsys.readouterr().out
        with open(out) as fp:
            result = json.load(fp)
        assert result["eliminate"] == ["Ra"]
        assert result["verdict"]["equal"]

    def test_needs_order(self, capsys, tmp_path):
        path = _write(tmp_path, "raw.txt", "R1 + Ra <= H(X)\n")
        assert cli.main(["derive", "--raw", path]) == cli.EXIT_ERROR
        assert cli.main(["derive", "--raw", path, "--eliminate", "Rb"]) == cli.EXIT_ERROR


class TestEval:
    def test_capacity(self, capsys, tmp_path):
        cfg = {
            "region": "THM5_NOISELESS_SWITCH",
            "params": {"tau1": "7/10", "tau2": "3/10"},
            "channel": {"kind": "noiseless_switch", "tau1": 0.7, "tau2": 0.3},
        }
        out = op.join(str(tmp_path), "thm5.csv")
        code = cli.main(["eval", "--config", _write(tmp_path, "cfg.json", cfg), "--out", out])
        assert code == cli.EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == "R1,R2"
        with open(op.join(str(tmp_path), "thm5.json")) as fp:
            assert not json.load(fp)["flagged"]

    def test_violated_assumption(self, capsys, tmp_path):
        cfg = {"region": "THM1_INNER", "distribution": _leaky_joint().to_json()}
        code = cli.main(["eval", "--config", _write(tmp_path, "cfg.json", cfg)])
        assert code == cli.EXIT_ASSUMPTION

    def test_needs_distribution(self, capsys, tmp_path):
        path = _write(tmp_path, "cfg.json", {"region": "THM1_INNER"})
        assert cli.main(["eval", "--config", path]) == cli.EXIT_ERROR


class TestSearchAndCompare:
    def test_search(self, capsys, tmp_path):
        channel = dict(common.noiseless_mac_channel().to_json(), kind="factorization")
        cfg = {"search": {"samples": 3, "directions": [[1, 1]], "refinement_passes": 0}}
        out = op.join(str(tmp_path), "env.csv")
        code = cli.main(
            [
                "search",
                "--region",
                "THM1_INNER",
                "--channel",
                _write(tmp_path, "channel.json", channel),
                "--config",
                _write(tmp_path, "cfg.json", cfg),
                "--seed",
                "5",
                "--out",
                out,
            ]
        )
        assert code == cli.EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == "lambda1,lambda2,R1,R2"
        with open(op.join(str(tmp_path), "env.json")) as fp:
            assert json.load(fp)["config"]["seed"] == 5

    def test_compare(self, capsys, tmp_path):
        inner = RegionEnvelope.from_vertices(RegionId.COR1_DEGRADED_INNER, [(1, 1)])
        outer = RegionEnvelope.from_vertices(RegionId.THM2_OUTER_DEGRADED, [(1, 0), (0, 1)])
        code = cli.main(
            [
                "compare",
                "--inner",
                _write(tmp_path, "inner.json", inner.to_json()),
                "--outer",
                _write(tmp_path, "outer.json", outer.to_json()),
            ]
        )
        assert code == cli.EXIT_OK
        assert "contained: False" in capsys.readouterr().out


class TestSimulate:
    def test_osrb(self, capsys, tmp_path):
        cfg = {
            "binning": {"n": 4, "R": 0.5, "trials": 2, "joint": common.hidden_joint().to_json()},
            "blocklengths": [4, 5],
        }
        out = op.join(str(tmp_path), "osrb.csv")
        code = cli.main(
            ["simulate-osrb", "--config", _write(tmp_path, "cfg.json", cfg), "--out", out]
        )
        assert code == cli.EXIT_OK
        assert "# trend:" in capsys.readouterr().out
        with open(out) as fp:
            assert fp.readline().strip() == "n,metric,value,trials"

    def test_lemma1(self, capsys, tmp_path):
        cfg = {
            "lemma1": {
                "n": 6,
                "S": 0.5,
                "T": 1.3,
                "epsilon": 1.0,
                "trials": 2,
                "joint": common.lemma1_joint().to_json(),
            }
        }
        code = cli.main(
            ["simulate-lemma1", "--config", _write(tmp_path, "cfg.json", cfg), "--seed", "3"]
        )
        assert code == cli.EXIT_OK
        assert capsys.readouterr().out.splitlines()[0].startswith("6,p_e1,")

    def test_bad_section(self, capsys, tmp_path):
        cfg = {"binning": {"n": 4, "R": 0.5}}
        code = cli.main(["simulate-osrb", "--config", _write(tmp_path, "cfg.json", cfg)])
        assert code == cli.EXIT_ERROR
