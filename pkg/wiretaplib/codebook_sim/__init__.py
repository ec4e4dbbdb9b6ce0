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

"""Seeded Monte Carlo experiments for codebook counting and random
binning."""

from .binning import BinningConfig, TvTrace, binning_tv, run_osrb_tv
from .counting import (
    LEMMA1_VARIABLES,
    Lemma1Config,
    Lemma1Result,
    estimate_entropy_LK,
    lemma1_csv_rows,
    run_lemma1_counting,
    sweep_lemma1,
)
from .typicality import SimulationException, is_strongly_typical, typical_mask

__all__ = [
    "BinningConfig",
    "LEMMA1_VARIABLES",
    "Lemma1Config",
    "Lemma1Result",
    "SimulationException",
    "TvTrace",
    "binning_tv",
    "estimate_entropy_LK",
    "is_strongly_typical",
    "lemma1_csv_rows",
    "run_lemma1_counting",
    "run_osrb_tv",
    "sweep_lemma1",
    "typical_mask",
]
