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

"""Secrecy rate regions for two-transmitter two-receiver wiretap
channels."""

__version__ = "0.1.0"

from . import (  # noqa: E402
    artifacts,
    codebook_sim,
    config,
    dist_core,
    dsl,
    info_measures,
    log,
    pattern,
    polyhedra,
    regions,
    utils,
)

__all__ = [
    "artifacts",
    "codebook_sim",
    "config",
    "dist_core",
    "dsl",
    "info_measures",
    "log",
    "pattern",
    "polyhedra",
    "regions",
    "utils",
]
