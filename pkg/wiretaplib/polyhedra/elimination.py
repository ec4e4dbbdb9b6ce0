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

"""This module provides exact Fourier-Motzkin elimination of rate variables."""

import time
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from ..dist_core import JointPmf
from ..log import Logs, log_enter_exit
from .redundancy import Certificate, RedundancyMode, remove_redundant
from .system import IneqSystem, LinIneq, PolyhedraException, nonnegativity

__all__ = ["EliminationStats", "fm_eliminate", "fm_project"]

logger = Logs().get_logger("polyhedra")


@dataclass(frozen=True)
class EliminationStats:
    """Bookkeeping of one elimination step."""

    var: str
    upper: int
    lower: int
    untouched: int
    generated: int
    kept: int
    assumptions: int
    seconds: float

    def __str__(self):
        return (
            f"eliminated {self.var}: {self.upper} upper x {self.lower} lower bounds, "
            f"{self.untouched} untouched, {self.generated} generated, "
            f"{self.kept} kept, {self.assumptions} assumptions ({self.seconds:.2f}s)"
        )


def _eliminate(system: IneqSystem, var: str) -> Tuple[IneqSystem, int, int, int, int]:
    upper: List[LinIneq] = []
    lower: List[LinIneq] = []
    untouched: List[LinIneq] = []
    for ineq in list(system.inequalities) + [nonnegativity(var)]:
        c = ineq.coeff(var)
        if c > 0:
            upper.append(ineq)
        elif c < 0:
            lower.append(ineq)
        else:
            untouched.append(ineq)
    combined: List[LinIneq] = []
    for u in upper:
        for l in lower:
            new = u.combine(l, 1 / u.coeff(var), 1 / -l.coeff(var))
            if new is None or new.is_trivial():
                continue
            combined.append(new)
    rest = [v for v in system.rate_vars if v != var]
    result = IneqSystem(rest, untouched + combined, system.assumptions, system.name)
    return result, len(upper), len(lower), len(untouched), len(combined)


def fm_eliminate(
    system: IneqSystem,
    var: str,
    mode: Optional[RedundancyMode] = RedundancyMode.FARKAS_SHANNON,
    audit: Optional[List[Certificate]] = None,
    screens: Sequence[JointPmf] = (),
) -> IneqSystem:
    """Project `system` along one rate variable.

    Every upper bound on `var` is paired with every lower bound, including
    `var >= 0`, with positive rational multipliers that cancel `var`.
    Inequalities left without rate variables become assumptions. Redundant
    constraints are then removed.

    Arguments:
        system: Inequality system.
        var: Rate variable to eliminate.
        mode: Redundancy mode, or None to skip redundancy removal.
        audit: Optional list receiving redundancy certificates.
        screens: Sample joints for numeric screening, see remove_redundant.

    Returns:
        The projected system over the remaining rate variables.

    Raises:
        PolyhedraException: If `var` is not a rate variable of `system`.

    Examples:
       >>> fm_eliminate(system, "Rd1")
    """

    if var not in system.rate_vars:
        raise PolyhedraException(
            f"Can not eliminate {var}: not in rate variables {list(system.rate_vars)}."
        )
    result, *_ = _eliminate(system, var)
    if mode is not None:
        result = remove_redundant(result, mode, audit, screens)
    return result


@log_enter_exit(logger)
def fm_project(
    system: IneqSystem,
    eliminate: Iterable[str],
    mode: Optional[RedundancyMode] = RedundancyMode.FARKAS_SHANNON,
    audit: Optional[List[Certificate]] = None,
    on_step: Optional[Callable[[EliminationStats, IneqSystem], None]] = None,
    screens: Sequence[JointPmf] = (),
) -> Tuple[IneqSystem, List[EliminationStats]]:
    """Eliminate several rate variables in the given order.

    Arguments:
        system: Inequality system.
        eliminate: Variables to eliminate, in elimination order.
        mode: Redundancy mode applied after each step, or None.
        audit: Optional list receiving redundancy certificates.
        on_step: Optional callback receiving stats and the current system.
        screens: Sample joints for numeric screening, see remove_redundant.

    Returns:
        The projected system and per-step statistics.

    Raises:
        PolyhedraException: If a variable is not a rate variable.
    """

    eliminate = list(eliminate)
    missing = [v for v in eliminate if v not in system.rate_vars]
    if missing:
        raise PolyhedraException(f"Can not eliminate unknown rate variables {missing}.")
    if mode is not None:
        system = remove_redundant(system, mode, audit, screens)
    stats: List[EliminationStats] = []
    for var in eliminate:
        start = time.monotonic()
        system, n_up, n_low, n_keep, n_new = _eliminate(system, var)
        if mode is not None:
            system = remove_redundant(system, mode, audit, screens)
        step = EliminationStats(
            var,
            n_up,
            n_low,
            n_keep,
            n_new,
            len(system.inequalities),
            len(system.assumptions),
            time.monotonic() - start,
        )
        logger.debug("%s", step)
        stats.append(step)
        if on_step is not None:
            on_step(step, system)
    return system, stats
