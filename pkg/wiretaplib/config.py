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

"""This module provides loading and validation of JSON experiment
configurations.

A configuration is one JSON object whose top-level keys are sections::

    {
        "region": "THM5_NOISELESS_SWITCH",
        "params": {"tau1": "7/10", "tau2": "3/10"},
        "channel": {"kind": "noiseless_switch", "tau1": 0.7, "tau2": 0.3},
        "search": {"samples": 500, "seed": 7}
    }
"""

import json
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from .dist_core import (
    DistributionException,
    FactorizationSpec,
    JointPmf,
    SwitchChannelParams,
    build_degraded_switch,
    build_noiseless_switch,
    compose_joint,
)
from .regions import AuxSearchConfig, RegionException
from .utils import as_fraction, is_false, is_true

__all__ = [
    "ConfigException",
    "SECTION_TYPES",
    "load_config",
    "validate_config",
    "get_flag",
    "parse_params",
    "build_channel",
    "build_joint",
    "search_config",
]

SECTION_TYPES: Dict[str, Tuple[type, ...]] = {
    "region": (str,),
    "params": (dict,),
    "channel": (dict,),
    "distribution": (dict,),
    "observations": (dict,),
    "substitution": (dict,),
    "search": (dict,),
    "lemma1": (dict,),
    "binning": (dict,),
    "blocklengths": (list,),
    "directions": (list,),
    "enforce_assumptions": (bool, str, int),
    "convexify": (bool, str, int),
}

CHANNEL_KINDS = ("noiseless_switch", "degraded_switch", "factorization")


class ConfigException(Exception):
    """Exception raised by configuration loading and validation."""

    pass


def validate_config(obj: Any, required: Iterable[str] = ()) -> Dict[str, Any]:
    """Check section names and types.

    Arguments:
        obj: Parsed JSON.
        required: Sections that must be present.

    Returns:
        The configuration dict.

    Raises:
        ConfigException: Naming the first offending key.
    """

    if not isinstance(obj, dict):
        raise ConfigException("Configuration must be a JSON object.")
    for key, value in obj.items():
        if key not in SECTION_TYPES:
            raise ConfigException(
                f"Unknown configuration key {key!r}, expected one of {sorted(SECTION_TYPES)}."
            )
        if not isinstance(value, SECTION_TYPES[key]):
            names = "/".join(t.__name__ for t in SECTION_TYPES[key])
            raise ConfigException(f"Configuration key {key!r} must be {names}.")
    for key in required:
        if key not in obj:
            raise ConfigException(f"Configuration is missing key {key!r}.")
    return obj


def load_config(path: str, required: Iterable[str] = ()) -> Dict[str, Any]:
    """Read and validate a JSON configuration file.

    Arguments:
        path: File path.
        required: Sections that must be present.

    Returns:
        The configuration dict.

    Raises:
        ConfigException: If the file is unreadable, not JSON, or invalid.

    Examples:
       >>> cfg = load_config("search.json", required=["region", "channel"])
       >>> channel = build_channel(cfg["channel"])
    """

    try:
        with open(path) as fp:
            obj = json.load(fp)
    except OSError as e:
        raise ConfigException(f"Can not read configuration {path}: {e}.")
    except ValueError as e:
        raise ConfigException(f"Configuration {path} is not valid JSON: {e}.")
    return validate_config(obj, required)


def get_flag(config: Mapping[str, Any], key: str, default: bool = False) -> bool:
    """Boolean option accepting the usual true/false spellings."""

    if key not in config:
        return default
    value = config[key]
    if is_true(value):
        return True
    if is_false(value):
        return False
    raise ConfigException(f"Configuration key {key!r} is not a boolean: {value!r}.")


def parse_params(obj: Optional[Mapping[str, Any]]) -> Dict[str, Fraction]:
    """Region parameters as exact rationals ("7/10", 0.7 or "0.7")."""

    params = {}
    for key, value in (obj or {}).items():
        try:
            params[key] = as_fraction(value)
        except ValueError as e:
            raise ConfigException(f"Parameter {key!r}: {e}.")
    return params


def build_channel(obj: Mapping[str, Any]) -> FactorizationSpec:
    """Channel factorization from a `channel` section.

    Kinds:
        noiseless_switch: tau1, tau2, optional x1_pmf and x2_pmf.
        degraded_switch: tau (or tau1), optional branch matrices "y1|x1",
            "y1|x2", "y2|y1", "z|y2" and input pmfs.
        factorization: an explicit {"factors": [...]} list.

    Raises:
        ConfigException: On an unknown kind or malformed channel.
    """

    kind = obj.get("kind")
    if kind not in CHANNEL_KINDS:
        raise ConfigException(f"Unknown channel kind {kind!r}, expected one of {CHANNEL_KINDS}.")
    try:
        if kind == "noiseless_switch":
            params = SwitchChannelParams(float(obj["tau1"]), float(obj["tau2"]))
            return build_noiseless_switch(params, obj.get("x1_pmf"), obj.get("x2_pmf"))
        if kind == "degraded_switch":
            tau = obj["tau"] if "tau" in obj else obj["tau1"]
            branches = {k: obj[k] for k in ("y1|x1", "y1|x2", "y2|y1", "z|y2") if k in obj}
            params = SwitchChannelParams(float(tau), branches=branches)
            return build_degraded_switch(params, x1_pmf=obj.get("x1_pmf"), x2_pmf=obj.get("x2_pmf"))
        return FactorizationSpec.from_json(obj)
    except KeyError as e:
        raise ConfigException(f"Channel {kind} is missing key {e}.")
    except (DistributionException, TypeError, ValueError) as e:
        raise ConfigException(f"Invalid channel {kind}: {e}")


def build_joint(obj: Mapping[str, Any]) -> JointPmf:
    """Joint pmf from a `distribution` section, either a factor list or an
    explicit {"variables": [...], "probs": [...]} table."""

    try:
        if "factors" in obj:
            return compose_joint(FactorizationSpec.from_json(obj))
        return JointPmf.from_json(obj)
    except DistributionException as e:
        raise ConfigException(f"Invalid distribution: {e}")


def search_config(obj: Optional[Mapping[str, Any]], seed: Optional[int] = None) -> AuxSearchConfig:
    """AuxSearchConfig from a `search` section, the seed optionally
    overridden."""

    obj = dict(obj or {})
    if seed is not None:
        obj["seed"] = int(seed)
    try:
        return AuxSearchConfig.from_json(obj)
    except (RegionException, TypeError, ValueError) as e:
        raise ConfigException(f"Invalid search settings: {e}")
