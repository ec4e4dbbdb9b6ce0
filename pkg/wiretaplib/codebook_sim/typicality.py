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

"""This module provides strong typicality tests for batches of sequences.

A sequence tuple is typical when every symbol tuple of positive probability
occurs with relative frequency within `epsilon * p` of `p`, and no tuple of
zero probability occurs at all.
"""

from typing import Sequence

import numpy as np

__all__ = [
    "SimulationException",
    "symbol_index",
    "type_counts",
    "typical_mask",
    "is_strongly_typical",
    "conditional_rows",
    "sample_conditional",
]

ZERO_PROB = 1e-15


class SimulationException(Exception):
    """Exception raised by codebook simulations."""

    pass


def symbol_index(columns: Sequence[np.ndarray], cards: Sequence[int]) -> np.ndarray:
    """Mixed-radix index of per-position symbol tuples.

    Arguments:
        columns: Symbol arrays of a common (broadcastable) shape, one per
            variable.
        cards: Cardinality of each variable.

    Returns:
        Integer array of tuple indices in [0, prod(cards)).
    """

    index = np.zeros(np.broadcast(*columns).shape, dtype=np.int64)
    for col, card in zip(columns, cards):
        index = index * int(card) + np.asarray(col, dtype=np.int64)
    return index


def type_counts(symbols: np.ndarray, alphabet: int) -> np.ndarray:
    """Per-row symbol counts of a (rows, n) index array."""

    symbols = np.atleast_2d(np.asarray(symbols, dtype=np.int64))
    rows = symbols.shape[0]
    offset = symbols + (np.arange(rows, dtype=np.int64) * alphabet)[:, None]
    return np.bincount(offset.ravel(), minlength=rows * alphabet).reshape(rows, alphabet)


def typical_mask(counts: np.ndarray, probs: np.ndarray, epsilon: float) -> np.ndarray:
    """Strong typicality of each row of a (rows, alphabet) count array.

    Arguments:
        counts: Symbol counts, one row per sequence.
        probs: Flat pmf over the alphabet.
        epsilon: Relative slack.

    Returns:
        Boolean array, one entry per row.
    """

    counts = np.atleast_2d(counts)
    n = counts.sum(axis=1, keepdims=True)
    probs = np.asarray(probs, dtype=float).reshape(1, -1)
    positive = probs > ZERO_PROB
    freq = counts / np.maximum(n, 1)
    within = np.abs(freq - probs) <= epsilon * probs + 1e-12
    ok = np.where(positive, within, counts == 0)
    return np.all(ok, axis=1)


def is_strongly_typical(
    columns: Sequence[np.ndarray], table: np.ndarray, epsilon: float
) -> bool:
    """Whether one tuple of sequences is strongly typical for `table`.

    Arguments:
        columns: One length-n symbol sequence per axis of `table`.
        table: Joint pmf tensor.
        epsilon: Relative slack.

    Examples:
       >>> is_strongly_typical([np.array([0, 1])], np.array([0.5, 0.5]), 0.1)
       True
    """

    table = np.asarray(table, dtype=float)
    idx = symbol_index(columns, table.shape)
    counts = type_counts(idx.reshape(1, -1), table.size)
    return bool(typical_mask(counts, table.reshape(-1), epsilon)[0])


def conditional_rows(table: np.ndarray, n_givens: int) -> np.ndarray:
    """Reshape a conditional table with given axes first into
    (parent configurations, target configurations)."""

    rows = int(np.prod(table.shape[:n_givens], dtype=np.int64))
    return np.asarray(table, dtype=float).reshape(rows, -1)


def sample_conditional(
    rng: np.random.Generator, rows: np.ndarray, parents: np.ndarray, copies: int = 1
) -> np.ndarray:
    """Draw target symbols position by position from p(target | parent).

    Arguments:
        rng: Generator.
        rows: Conditional table of shape (parents, targets).
        parents: Parent configuration index per position, shape (n,).
        copies: Number of independent sequences.

    Returns:
        Array of shape (copies, n) with target configuration indices.
    """

    cdf = np.cumsum(rows, axis=1)
    cdf[:, -1] = 1.0
    per_position = cdf[np.asarray(parents, dtype=np.int64)]
    u = rng.random((copies, len(parents)))
    # number of cdf steps below u
    return (u[:, :, None] >= per_position[None, :, :-1]).sum(axis=2)
