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

import os.path as op

import numpy as np

from wiretaplib.dist_core import (
    Factor,
    FactorizationSpec,
    FactorizationTemplate,
    VariableSpec,
    compose_joint,
)

cur_dir = op.dirname(op.abspath(__file__))

# Tolerances
ATOL = 1e-9
LOOSE = 1e-6


def var(name, card=2):
    return VariableSpec(name, card)


def uniform(name, card=2):
    return Factor.uniform([var(name, card)])


def const(name, givens=()):
    """A cardinality-1 variable."""
    return Factor.deterministic([var(name, 1)], list(givens), lambda *_: 0)


def copy_of(name, source, card=2):
    return Factor.deterministic([var(name, card)], [var(source, card)], lambda x: x)


def joint_of(*factors):
    return compose_joint(FactorizationSpec(factors))


def random_joint(shapes, cards, seed=0):
    """Random member of the family `shapes`, e.g. ["X", "Y|X"]."""
    template = FactorizationTemplate.parse(shapes)
    spec = template.sample(cards, np.random.default_rng(seed))
    return compose_joint(spec)


def noiseless_mac_channel():
    """Both legitimate receivers see (X1, X2); the eavesdropper sees nothing."""
    x1, x2 = var("X1"), var("X2")
    return FactorizationSpec(
        [
            uniform("X1"),
            uniform("X2"),
            Factor.deterministic([var("Y1", 4)], [x1, x2], lambda a, b: 2 * a + b),
            copy_of("Y2", "Y1", card=4),
            const("Z"),
        ]
    )


def xor_joint():
    """U0 = X1 and V0 = X2 independent uniform bits, Y1 = Y2 = X1 xor X2,
    Z constant."""
    x1, x2 = var("X1"), var("X2")
    return joint_of(
        const("Q"),
        uniform("U0"),
        uniform("V0"),
        copy_of("X1", "U0"),
        copy_of("X2", "V0"),
        Factor.deterministic([var("Y1")], [x1, x2], lambda a, b: a ^ b),
        copy_of("Y2", "Y1"),
        const("Z"),
    )


def correlated_xor_joint():
    """U0 = V0 = W uniform on four values, X1 and X2 its two bits,
    Y1 = Y2 = X1 xor X2, Z constant."""
    u0, v0 = var("U0", 4), var("V0", 4)
    x1, x2 = var("X1"), var("X2")
    return joint_of(
        const("Q"),
        Factor([u0, v0], [], np.eye(4) / 4),
        Factor.deterministic([x1], [u0], lambda w: w & 1),
        Factor.deterministic([x2], [v0], lambda w: w >> 1),
        Factor.deterministic([var("Y1")], [x1, x2], lambda a, b: a ^ b),
        copy_of("Y2", "Y1"),
        const("Z"),
    )


def lemma1_joint():
    """Q, U0, V0 constant; U1, V1 uniform bits; Z = V1."""
    return joint_of(
        const("Q"),
        const("U0"),
        const("V0"),
        uniform("U1"),
        uniform("V1"),
        copy_of("Z", "V1"),
    )


def bsc_joint(p):
    """X uniform bit observed as Z through a binary symmetric channel."""
    return joint_of(uniform("X"), Factor([var("Z")], [var("X")], [[1 - p, p], [p, 1 - p]]))


def hidden_joint():
    """X uniform bit, Z constant."""
    return joint_of(uniform("X"), const("Z"))
