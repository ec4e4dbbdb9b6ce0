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

"""Common utilities."""

from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

__all__ = [
    "is_true",
    "is_false",
    "as_fraction",
    "fraction_to_str",
    "derive_rng",
]


def is_true(val: Union[str, int]) -> bool:
    """Decide if `val` is true.

    Arguments:
        val: Value to check.

    Returns:
        True or False.
    """

    value = str(val).strip().upper()
    if value in ("1", "TRUE", "T", "Y", "YES"):
        return True
    return False


def is_false(val: Union[str, int]) -> bool:
    """Decide if `val` is false.

    Arguments:
        val: Value to check.

    Returns:
        True or False.
    """

    value = str(val).strip().upper()
    if value in ("0", "FALSE", "F", "N", "NO", "NONE", ""):
        return True
    return False


def as_fraction(val: Union[str, int, float, Fraction]) -> Fraction:
    """Convert `val` to an exact rational.

    Floats go through their shortest decimal representation, so 0.7 becomes
    7/10 rather than the binary expansion of 0.7.

    Arguments:
        val: "p/q" or decimal string, int, float or Fraction.

    Returns:
        Exact rational value.

    Raises:
        ValueError: If `val` can not be read as a rational.

    Examples:
       >>> as_fraction("3/10")
       Fraction(3, 10)
       >>> as_fraction(0.7)
       Fraction(7, 10)
    """

    if isinstance(val, bool):
        raise ValueError(f"{val!r} is not a rational number")
    if isinstance(val, Rational):
        return Fraction(val)
    if isinstance(val, float):
        if not np.isfinite(val):
            raise ValueError(f"{val!r} is not a rational number")
        return Fraction(repr(val))
    if isinstance(val, str):
        try:
            return Fraction(val.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{val!r} is not a rational number")
    raise ValueError(f"{val!r} is not a rational number")


def fraction_to_str(val: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""

    if val.denominator == 1:
        return str(val.numerator)
    return f"{val.numerator}/{val.denominator}"


def derive_rng(seed: int, *index: int) -> np.random.Generator:
    """Derive an independent generator for one work item.

    The stream depends only on `seed` and `index`, so results do not depend
    on the order or parallelism in which items are processed.

    Arguments:
        seed: Root seed.
        index: Work item coordinates, e.g. (blocklength, trial).

    Returns:
        A numpy Generator.
    """

    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, index)])
