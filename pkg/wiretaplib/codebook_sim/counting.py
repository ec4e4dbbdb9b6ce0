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

"""This module provides the Monte Carlo experiment for the codebook
counting bound of two superposition codebooks observed by an eavesdropper.

Each trial draws (Q^n, U0^n, V0^n), a U1 codebook of 2^ceil(nS) sequences
drawn from p(u1|q,u0) and a V1 codebook of 2^ceil(nT) sequences drawn from
p(v1|q,v0). A transmitted index pair (L, K) is drawn uniformly and Z^n is
drawn through p(z|q,u0,v0,u1,v1) from the transmitted codewords. The trial
then counts the index pairs whose codewords are jointly typical with the
observed sequences.
"""

import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..dist_core import (
    DistributionException,
    FactorizationSpec,
    JointPmf,
    compose_joint,
)
from ..info_measures import eval_expr, mutual_info_expr
from ..log import Logs
from ..utils import derive_rng
from .typicality import (
    SimulationException,
    conditional_rows,
    sample_conditional,
    type_counts,
    typical_mask,
)

__all__ = [
    "LEMMA1_VARIABLES",
    "MAX_PAIRS",
    "Lemma1Config",
    "Lemma1Result",
    "run_lemma1_counting",
    "estimate_entropy_LK",
    "sweep_lemma1",
    "lemma1_csv_rows",
]

logger = Logs().get_logger("codebook_sim")

LEMMA1_VARIABLES = ("Q", "U0", "V0", "U1", "V1", "Z")
MAX_PAIRS = 2 ** 26
BOOK_CHUNK = 2 ** 15
PAIR_CHUNK = 2 ** 22


def _codebook_bits(n: int, rate: float) -> int:
    return int(math.ceil(round(n * rate, 9)))


def _read_joint(obj) -> JointPmf:
    if isinstance(obj, JointPmf):
        return obj
    if isinstance(obj, dict) and "factors" in obj:
        return compose_joint(FactorizationSpec.from_json(obj))
    return JointPmf.from_json(obj)


@dataclass(frozen=True)
class Lemma1Config:
    """Settings of one counting experiment.

    `delta` is the slack in the exponent of the counting threshold and
    defaults to `epsilon`; `delta2` is the entropy slack and defaults to
    three times `delta`; `delta1` enters the rate thresholds and the
    multiplicative factor of the counting threshold.
    """

    n: int
    joint: JointPmf
    S: float
    T: float
    epsilon: float = 0.1
    delta1: float = 0.1
    delta: Optional[float] = None
    delta2: Optional[float] = None
    trials: int = 100
    seed: int = 0
    max_pairs: int = MAX_PAIRS

    def __post_init__(self):
        if self.n < 1:
            raise SimulationException(f"Blocklength must be at least 1, got {self.n}.")
        if self.trials < 1:
            raise SimulationException(f"Trials must be at least 1, got {self.trials}.")
        if self.S < 0 or self.T < 0:
            raise SimulationException(f"Rates must be nonnegative, got S={self.S}, T={self.T}.")
        if self.epsilon <= 0:
            raise SimulationException(f"Typicality slack must be positive, got {self.epsilon}.")
        missing = [v for v in LEMMA1_VARIABLES if v not in self.joint]
        if missing:
            raise SimulationException(f"Joint is missing variables {missing}.")

    @property
    def delta_value(self) -> float:
        return self.epsilon if self.delta is None else self.delta

    @property
    def delta2_value(self) -> float:
        return 3 * self.delta_value if self.delta2 is None else self.delta2

    @property
    def u_bits(self) -> int:
        return _codebook_bits(self.n, self.S)

    @property
    def v_bits(self) -> int:
        return _codebook_bits(self.n, self.T)

    def with_n(self, n: int) -> "Lemma1Config":
        return replace(self, n=n)

    def information(self) -> Dict[str, float]:
        """The three conditional mutual informations the thresholds use."""
        cond = ("Q", "U0", "V0")
        return {
            "u1": eval_expr(mutual_info_expr("U1", "Z", cond), self.joint),
            "v1": eval_expr(mutual_info_expr("V1", "Z", cond), self.joint),
            "joint": eval_expr(mutual_info_expr(("U1", "V1"), "Z", cond), self.joint),
        }

    def regime(self) -> str:
        """"satisfied" when all three rate thresholds hold, else "violated"."""
        info = self.information()
        ok = (
            self.S > info["u1"] + self.delta1
            and self.T > info["v1"] + self.delta1
            and self.S + self.T > info["joint"] + self.delta1
        )
        return "satisfied" if ok else "violated"

    def to_json(self) -> dict:
        obj = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "joint"}
        obj["joint"] = self.joint.to_json()
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Lemma1Config":
        obj = dict(obj)
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(obj) - known)
        if unknown:
            raise SimulationException(f"Unknown Lemma1Config keys {unknown}.")
        try:
            obj["joint"] = _read_joint(obj["joint"])
            return cls(**obj)
        except KeyError as e:
            raise SimulationException(f"Lemma1Config is missing key {e}.")
        except (DistributionException, TypeError) as e:
            raise SimulationException(f"Invalid Lemma1Config: {e}")


@dataclass
class Lemma1Result:
    """Aggregated outcome of a counting experiment."""

    n: int
    trials: int
    regime: str
    u_bits: int
    v_bits: int
    p_e1: float
    mean_count: float
    max_count: int
    entropy: float
    bound: float
    threshold: float
    exceed_fraction: float
    typical_fraction: float
    degenerate: int
    information: Dict[str, float] = field(default_factory=dict)
    counts: List[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


class _Lemma1Tables:
    """Conditionals and marginals of the base joint used by every trial."""

    def __init__(self, joint: JointPmf):
        names = LEMMA1_VARIABLES
        self.cards = [joint.cardinality(v) for v in names]
        cq, cu0, cv0, cu1, cv1, cz = self.cards
        self.full = joint.marginal_tensor(names).reshape(-1)
        self.base = joint.marginal_tensor(("Q", "U0", "V0")).reshape(-1)
        self.u_rows = conditional_rows(
            joint.conditional(["U1"], ["Q", "U0"], undefined="uniform").table, 2
        )
        self.v_rows = conditional_rows(
            joint.conditional(["V1"], ["Q", "V0"], undefined="uniform").table, 2
        )
        self.z_rows = conditional_rows(
            joint.conditional(["Z"], list(names[:5]), undefined="uniform").table, 5
        )
        self.u_marginal = joint.marginal_tensor(("Q", "U0", "V0", "U1", "Z")).reshape(-1)
        self.v_marginal = joint.marginal_tensor(("Q", "U0", "V0", "V1", "Z")).reshape(-1)
        self.shape = (cq, cu0, cv0)
        self.cu1, self.cv1, self.cz = cu1, cv1, cz


def _draw_book(rng, rows, parents, bits: int) -> np.ndarray:
    size = 2 ** bits
    chunks = []
    for start in range(0, size, BOOK_CHUNK):
        chunks.append(
            sample_conditional(rng, rows, parents, min(BOOK_CHUNK, size - start)).astype(np.int16)
        )
    return np.concatenate(chunks, axis=0)


def _typical_rows(book: np.ndarray, offset: np.ndarray, scale: int, probs, epsilon) -> np.ndarray:
    """Indices of codewords whose tuple with the fixed sequences is typical."""
    keep = []
    for start in range(0, len(book), BOOK_CHUNK):
        part = book[start : start + BOOK_CHUNK].astype(np.int64) * scale + offset[None, :]
        mask = typical_mask(type_counts(part, len(probs)), probs, epsilon)
        keep.append(np.nonzero(mask)[0] + start)
    return np.concatenate(keep) if keep else np.zeros(0, dtype=np.int64)


def _exceeding(counts: np.ndarray, threshold: float) -> float:
    """Fraction of trials whose count strictly exceeds `threshold`."""
    return float(np.mean(counts > threshold)) if len(counts) else 0.0


def _run_trial(cfg: Lemma1Config, tables: _Lemma1Tables, trial: int) -> Tuple[int, bool]:
    n, eps = cfg.n, cfg.epsilon
    rng = derive_rng(cfg.seed, n, trial)
    flat = rng.choice(len(tables.base), size=n, p=tables.base / tables.base.sum())
    q, u0, v0 = np.unravel_index(flat, tables.shape)
    cq, cu0, cv0 = tables.shape
    cu1, cv1, cz = tables.cu1, tables.cv1, tables.cz

    u_book = _draw_book(rng, tables.u_rows, q * cu0 + u0, cfg.u_bits)
    v_book = _draw_book(rng, tables.v_rows, q * cv0 + v0, cfg.v_bits)
    sent_l = int(rng.integers(len(u_book)))
    sent_k = int(rng.integers(len(v_book)))
    z_parent = (((q * cu0 + u0) * cv0 + v0) * cu1 + u_book[sent_l]) * cv1 + v_book[sent_k]
    z = sample_conditional(rng, tables.z_rows, z_parent)[0]

    # full tuple index: base * (cu1 cv1 cz) + u1 * (cv1 cz) + v1 * cz + z
    base = ((q * cu0 + u0) * cv0 + v0).astype(np.int64)
    full_offset = base * (cu1 * cv1 * cz) + z
    sent = full_offset + u_book[sent_l].astype(np.int64) * (cv1 * cz) + v_book[sent_k].astype(np.int64) * cz
    sent_typical = bool(typical_mask(type_counts(sent[None, :], len(tables.full)), tables.full, eps)[0])

    # marginal typicality is necessary for joint typicality, so prune first
    good_u = _typical_rows(u_book, base * (cu1 * cz) + z, cz, tables.u_marginal, eps)
    good_v = _typical_rows(v_book, base * (cv1 * cz) + z, cz, tables.v_marginal, eps)
    if not len(good_u) or not len(good_v):
        return 0, sent_typical
    u_part = u_book[good_u].astype(np.int64) * (cv1 * cz)
    v_part = v_book[good_v].astype(np.int64) * cz
    step = max(1, PAIR_CHUNK // (len(good_v) * n))
    count = 0
    for start in range(0, len(good_u), step):
        idx = full_offset[None, None, :] + u_part[start : start + step, None, :] + v_part[None, :, :]
        idx = idx.reshape(-1, n)
        count += int(typical_mask(type_counts(idx, len(tables.full)), tables.full, eps).sum())
    return count, sent_typical


def run_lemma1_counting(
    cfg: Lemma1Config, on_trial: Optional[Callable[[int, int], None]] = None
) -> Lemma1Result:
    """Run the counting experiment.

    Arguments:
        cfg: Experiment settings.
        on_trial: Optional progress callback receiving (done, total).

    Returns:
        Lemma1Result with P(E1), count statistics, the entropy estimate of
        the index pair and its bound; identical seeds give identical
        results.

    Raises:
        SimulationException: If the codebook pair space exceeds
            `cfg.max_pairs`.

    Examples:
       >>> result = run_lemma1_counting(Lemma1Config(n=10, joint=joint, S=0.5, T=1.3, trials=20))
       >>> result.p_e1, result.entropy <= result.bound
    """

    pairs = 2 ** (cfg.u_bits + cfg.v_bits)
    if pairs > cfg.max_pairs:
        raise SimulationException(
            f"{pairs} codeword pairs at n={cfg.n} exceed the limit of {cfg.max_pairs}."
        )
    start = time.monotonic()
    tables = _Lemma1Tables(cfg.joint)
    info = cfg.information()
    n = cfg.n
    exponent = cfg.u_bits + cfg.v_bits - n * info["joint"]
    threshold = (1 + cfg.delta1) * 2.0 ** (exponent + n * cfg.delta_value)
    bound = exponent + n * cfg.delta2_value

    counts, typical = [], 0
    for t in range(cfg.trials):
        count, sent_typical = _run_trial(cfg, tables, t)
        counts.append(count)
        typical += sent_typical
        if on_trial is not None:
            on_trial(t + 1, cfg.trials)

    arr = np.array(counts, dtype=np.int64)
    positive = arr[arr > 0]
    entropies = np.log2(positive) if len(positive) else np.zeros(0)
    degenerate = int(len(arr) - len(positive))
    if degenerate:
        logger.debug("%d of %d trials had no typical index pair", degenerate, cfg.trials)
    result = Lemma1Result(
        n=n,
        trials=cfg.trials,
        regime=cfg.regime(),
        u_bits=cfg.u_bits,
        v_bits=cfg.v_bits,
        p_e1=_exceeding(arr, threshold),
        mean_count=float(arr.mean()),
        max_count=int(arr.max()),
        entropy=float(entropies.mean()) if len(entropies) else 0.0,
        bound=float(bound),
        threshold=float(threshold),
        exceed_fraction=float(np.mean(entropies > bound)) if len(entropies) else 0.0,
        typical_fraction=typical / cfg.trials,
        degenerate=degenerate,
        information=info,
        counts=counts,
    )
    logger.info(
        "Counting experiment n=%d (%s): P(E1)=%.3f, entropy %.3f vs bound %.3f, %.1fs",
        n,
        result.regime,
        result.p_e1,
        result.entropy,
        result.bound,
        time.monotonic() - start,
    )
    return result


def estimate_entropy_LK(cfg: Lemma1Config) -> float:
    """Plug-in estimate of H(L,K | Q^n,U0^n,V0^n,Z^n,C) in bits.

    Per trial the index pair is taken uniform over the jointly typical
    pairs, so its entropy is log2 of their number; trials without a
    typical pair are excluded and counted in the result of
    `run_lemma1_counting`.
    """

    return run_lemma1_counting(cfg).entropy


def sweep_lemma1(cfg: Lemma1Config, blocklengths: Sequence[int]) -> List[Lemma1Result]:
    """Run the experiment at each blocklength with the same seed."""

    return [run_lemma1_counting(cfg.with_n(n)) for n in blocklengths]


LEMMA1_METRICS = ("p_e1", "mean_count", "entropy", "bound", "exceed_fraction", "typical_fraction")


def lemma1_csv_rows(results: Sequence[Lemma1Result]) -> List[Tuple[int, str, float, int]]:
    """Rows (n, metric, value, trials) of a sweep."""

    return [
        (r.n, metric, float(getattr(r, metric)), r.trials)
        for r in results
        for metric in LEMMA1_METRICS
    ]
