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

"""This module provides the random binning experiment.

Every source sequence x^n receives a uniformly random bin index at rate R.
The exact total variation between the induced law of (bin, Z^n) and the
product of a uniform bin with p(z^n) is computed by full enumeration,
which keeps the experiment to small blocklengths.
"""

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import spearmanr

from ..dist_core import DistributionException, JointPmf
from ..info_measures import cond_entropy_expr, eval_expr
from ..log import Logs
from ..utils import derive_rng
from .counting import _read_joint
from .typicality import SimulationException

__all__ = [
    "MAX_STATES",
    "BinningConfig",
    "TvTrace",
    "binning_tv",
    "run_osrb_tv",
]

logger = Logs().get_logger("codebook_sim")

MAX_STATES = 2 ** 22
MAX_CELLS = 2 ** 24


@dataclass(frozen=True)
class BinningConfig:
    """Settings of one binning experiment over the pair (`source`, `observer`)."""

    n: int
    joint: JointPmf
    R: float
    trials: int = 20
    seed: int = 0
    source: str = "X"
    observer: str = "Z"

    def __post_init__(self):
        if self.n < 1:
            raise SimulationException(f"Blocklength must be at least 1, got {self.n}.")
        if self.R < 0:
            raise SimulationException(f"Bin rate must be nonnegative, got {self.R}.")
        if self.trials < 1:
            raise SimulationException(f"Trials must be at least 1, got {self.trials}.")
        for name in (self.source, self.observer):
            if name not in self.joint:
                raise SimulationException(f"Joint has no variable {name!r}.")

    @property
    def bin_bits(self) -> int:
        return int(math.ceil(round(self.n * self.R, 9)))

    def with_n(self, n: int) -> "BinningConfig":
        return replace(self, n=n)

    def secure_rate(self) -> float:
        """H(source | observer) in bits; rates below it keep the bin hidden."""
        return eval_expr(cond_entropy_expr(self.source, self.observer), self.joint)

    def to_json(self) -> dict:
        obj = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "joint"}
        obj["joint"] = self.joint.to_json()
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "BinningConfig":
        obj = dict(obj)
        unknown = sorted(set(obj) - set(cls.__dataclass_fields__))
        if unknown:
            raise SimulationException(f"Unknown BinningConfig keys {unknown}.")
        try:
            obj["joint"] = _read_joint(obj["joint"])
            return cls(**obj)
        except KeyError as e:
            raise SimulationException(f"BinningConfig is missing key {e}.")
        except (DistributionException, TypeError) as e:
            raise SimulationException(f"Invalid BinningConfig: {e}")


@dataclass
class TvTrace:
    """Mean total variation per blocklength."""

    R: float
    secure_rate: float
    trials: int
    ns: List[int] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    stds: List[float] = field(default_factory=list)

    @property
    def regime(self) -> str:
        return "secure" if self.R < self.secure_rate else "insecure"

    def trend(self) -> float:
        """Spearman rank correlation of TV against blocklength."""
        if len(self.ns) < 2:
            return 0.0
        return float(spearmanr(self.ns, self.values).correlation)

    def csv_rows(self) -> List[Tuple[int, str, float, int]]:
        rows = []
        for n, value, std in zip(self.ns, self.values, self.stds):
            rows.append((n, "tv", value, self.trials))
            rows.append((n, "tv_std", std, self.trials))
        return rows

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "secure_rate": self.secure_rate,
            "regime": self.regime,
            "trials": self.trials,
            "ns": list(self.ns),
            "values": list(self.values),
            "stds": list(self.stds),
            "trend": self.trend(),
        }


def binning_tv(cfg: BinningConfig) -> np.ndarray:
    """Exact total variation of every trial at blocklength `cfg.n`.

    Raises:
        SimulationException: If the enumeration exceeds the state limits.
    """

    pxz = cfg.joint.marginal_tensor((cfg.source, cfg.observer))
    cx, cz = pxz.shape
    n = cfg.n
    states = max(cx, cz) ** n
    bins = 2 ** cfg.bin_bits
    if states > MAX_STATES or bins * states > MAX_CELLS:
        raise SimulationException(
            f"Enumeration of {states} sequences in {bins} bins at n={n} exceeds the limit."
        )
    values = np.zeros(cfg.trials)
    for t in range(cfg.trials):
        rng = derive_rng(cfg.seed, n, t)
        index = rng.integers(bins, size=cx ** n)
        table = np.zeros((bins, cx ** n))
        table[index, np.arange(cx ** n)] = 1.0
        table = table.reshape((bins,) + (cx,) * n)
        for _ in range(n):
            # contracts the leading source axis, appends an observer axis
            table = np.tensordot(table, pxz, axes=([1], [0]))
        product = table.sum(axis=0, keepdims=True) / bins
        values[t] = 0.5 * float(np.abs(table - product).sum())
    return values


def run_osrb_tv(cfg: BinningConfig, blocklengths: Optional[Sequence[int]] = None) -> TvTrace:
    """Sweep the binning experiment over blocklengths.

    Arguments:
        cfg: Experiment settings; `cfg.n` is used when `blocklengths` is None.
        blocklengths: Blocklengths to evaluate with the same seed.

    Returns:
        A TvTrace; identical seeds give identical traces.

    Raises:
        SimulationException: If an enumeration exceeds the state limits.

    Examples:
       >>> trace = run_osrb_tv(BinningConfig(n=4, joint=joint, R=0.5), range(4, 15))
       >>> trace.trend()
    """

    trace = TvTrace(cfg.R, cfg.secure_rate(), cfg.trials)
    for n in blocklengths or [cfg.n]:
        values = binning_tv(cfg.with_n(n))
        trace.ns.append(int(n))
        trace.values.append(float(values.mean()))
        trace.stds.append(float(values.std()))
        logger.debug("Binning n=%d: mean TV %.4f", n, trace.values[-1])
    logger.info(
        "Binning sweep at R=%.3f (%s): trend %.3f", cfg.R, trace.regime, trace.trend()
    )
    return trace
