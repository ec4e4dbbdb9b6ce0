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

"""This module provides certified redundancy removal for inequality systems.

An inequality `a.R <= c` is implied when nonnegative multipliers exist with

    sum_k lam_k A_k - mu = a                   (rate rows, mu >= 0 from R >= 0)
    sum_k lam_k C_k + sum_g nu_g g = c         (entropy atom rows)
    sum_k lam_k c0_k + sigma = c0              (numeric constant row)

where `g` ranges, in `farkas+shannon` mode, over the monotonicity
expressions H(T) - H(S) for S a subset of T, H(T) itself, and the
submodularity expressions H(S) + H(T) - H(S | T) - H(S & T) whose union
and intersection are atoms of the program. The latter make every
conditional mutual information over the atoms present nonnegative.
Multipliers are found with the HiGHS solver, then rationalized and
verified in exact arithmetic; a certificate that does not verify exactly
is never used.

Before solving, a candidate can be screened at sample joints: a
constraint that cuts the numeric polyhedron of the others at an entropic
point satisfying every premise has no certificate.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import sparse
from scipy.optimize import linprog

from ..dist_core import JointPmf
from ..info_measures import EntropyAtom, InfoExpr, eval_expr
from ..log import Logs
from ..utils import fraction_to_str
from .system import IneqSystem, LinIneq

__all__ = [
    "RedundancyMode",
    "Certificate",
    "remove_redundant",
    "implies",
]

logger = Logs().get_logger("polyhedra")

ZERO_CUTOFF = 1e-9
MAX_DENOMINATOR = 10 ** 6
SCREEN_TOL = 1e-7


class RedundancyMode(str, Enum):
    FARKAS = "farkas"
    FARKAS_SHANNON = "farkas+shannon"

    @classmethod
    def parse(cls, value) -> "RedundancyMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower())


def _intersection(a: EntropyAtom, b: EntropyAtom) -> Optional[EntropyAtom]:
    common = a.varset & b.varset
    return EntropyAtom(sorted(common)) if common else None


def _submodular_expr(a: EntropyAtom, b: EntropyAtom) -> InfoExpr:
    """H(a) + H(b) - H(a | b) - H(a & b), a conditional mutual information."""
    expr = InfoExpr.atom(a.vars) + InfoExpr.atom(b.vars) - InfoExpr.atom(a.union(b).vars)
    meet = _intersection(a, b)
    return expr if meet is None else expr - InfoExpr.atom(meet.vars)


@dataclass(frozen=True)
class Certificate:
    """Nonnegative rational multipliers proving `target` from other constraints."""

    target: LinIneq
    multipliers: Tuple[Tuple[LinIneq, Fraction], ...]
    nonneg: Tuple[Tuple[str, Fraction], ...] = ()
    monotone: Tuple[Tuple[Optional[EntropyAtom], EntropyAtom, Fraction], ...] = ()
    slack: Fraction = Fraction(0)
    submodular: Tuple[Tuple[EntropyAtom, EntropyAtom, Fraction], ...] = ()

    def verify(self) -> bool:
        """Recheck the certificate in exact arithmetic."""
        values = [c for _, c in self.multipliers] + [c for _, c in self.nonneg]
        values += [c for _, _, c in self.monotone] + [c for _, _, c in self.submodular]
        values.append(self.slack)
        if any(v < 0 for v in values):
            return False
        coeffs: Dict[str, Fraction] = {}
        constant = InfoExpr()
        for ineq, lam in self.multipliers:
            for v, c in ineq.coeffs.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + lam * c
            constant = constant + ineq.constant * lam
        for v, mu in self.nonneg:
            coeffs[v] = coeffs.get(v, Fraction(0)) - mu
        for small, big, nu in self.monotone:
            constant = constant + InfoExpr.atom(big.vars) * nu
            if small is not None:
                constant = constant - InfoExpr.atom(small.vars) * nu
        for a, b, xi in self.submodular:
            constant = constant + _submodular_expr(a, b) * xi
        constant = constant + self.slack
        target_coeffs = dict(self.target.coeffs)
        names = set(coeffs) | set(target_coeffs)
        return all(
            coeffs.get(v, Fraction(0)) == target_coeffs.get(v, Fraction(0)) for v in names
        ) and constant == self.target.constant

    def to_json(self) -> dict:
        return {
            "target": self.target.tag or str(self.target),
            "multipliers": [
                [i.tag or str(i), fraction_to_str(c)] for i, c in self.multipliers
            ],
            "nonneg": [[v, fraction_to_str(c)] for v, c in self.nonneg],
            "monotone": [
                [str(s) if s is not None else "0", str(t), fraction_to_str(c)]
                for s, t, c in self.monotone
            ],
            "submodular": [[str(a), str(b), fraction_to_str(c)] for a, b, c in self.submodular],
            "slack": fraction_to_str(self.slack),
        }

    def __str__(self):
        terms = [f"{fraction_to_str(c)}*[{i.tag or i}]" for i, c in self.multipliers]
        terms += [f"{fraction_to_str(c)}*[{v}>=0]" for v, c in self.nonneg]
        terms += [
            f"{fraction_to_str(c)}*[{t}>={s if s is not None else 0}]"
            for s, t, c in self.monotone
        ]
        terms += [f"{fraction_to_str(c)}*[{_submodular_expr(a, b)}>=0]" for a, b, c in self.submodular]
        return "{} <= {}".format(self.target.tag or self.target, " + ".join(terms) or "0")


def _monotone_pairs(atoms: Sequence[EntropyAtom]) -> List[Tuple[Optional[int], int]]:
    """Covering pairs (S, T) with S a proper subset of T, plus (None, T) for
    minimal T. Their cone holds every H(T) - H(S) and H(T) >= 0."""
    sets = [a.varset for a in atoms]
    order = sorted(range(len(atoms)), key=lambda i: -len(sets[i]))
    pairs: List[Tuple[Optional[int], int]] = []
    for t in range(len(atoms)):
        subsets = [s for s in order if sets[s] < sets[t]]
        maximal: List[int] = []
        for s in subsets:
            if not any(sets[s] < sets[m] for m in maximal):
                maximal.append(s)
        if not subsets:
            pairs.append((None, t))
        pairs.extend((s, t) for s in maximal)
    return pairs


def _submodular_pairs(atoms: Sequence[EntropyAtom]) -> List[Tuple[int, int, int, Optional[int]]]:
    """Incomparable pairs (S, T) whose union and nonempty intersection are
    atoms too, as (S, T, union, intersection) indices."""
    index = {a.varset: i for i, a in enumerate(atoms)}
    sets = [a.varset for a in atoms]
    pairs = []
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            if sets[i] <= sets[j] or sets[j] <= sets[i]:
                continue
            union = index.get(sets[i] | sets[j])
            if union is None:
                continue
            common = sets[i] & sets[j]
            if common and common not in index:
                continue
            pairs.append((i, j, union, index[common] if common else None))
    return pairs


class _Screen:
    """Numeric values of a constraint pool at sample joints."""

    def __init__(self, rate_vars: Sequence[str], pool: Sequence[LinIneq], joints: Sequence[JointPmf]):
        self.A = np.array(
            [[float(i.coeff(v)) for v in rate_vars] for i in pool], dtype=float
        ).reshape(len(pool), len(rate_vars))
        needed = set()
        for ineq in pool:
            needed |= ineq.constant.variables
        self.values: List[np.ndarray] = []
        for joint in joints:
            if not needed <= set(joint.names):
                continue
            cache: Dict[EntropyAtom, float] = {}
            self.values.append(np.array([eval_expr(i.constant, joint, cache) for i in pool]))

    def __bool__(self):
        return bool(self.values)

    def necessary(self, k: int, premises: Sequence[int]) -> bool:
        """True when constraint `k` cuts the polyhedron of `premises` at one
        joint where every premise assumption holds."""

        target = self.A[k]
        rows = np.array(premises, dtype=np.int64)
        A = self.A[rows] if len(rows) else np.zeros((0, self.A.shape[1]))
        bare = ~A.any(axis=1)
        for c in self.values:
            b = c[rows] if len(rows) else np.zeros(0)
            if np.any(b[bare] < -SCREEN_TOL):
                continue
            if not target.any():
                best = 0.0
            else:
                res = linprog(
                    -target,
                    A_ub=A[~bare] if (~bare).any() else None,
                    b_ub=b[~bare] if (~bare).any() else None,
                    bounds=[(0, None)] * len(target),
                    method="highs",
                )
                if res.status == 3:
                    return True
                if res.status != 0:
                    continue
                best = -float(res.fun)
            if best > c[k] + SCREEN_TOL * (1 + abs(c[k])):
                return True
        return False


class _ImplicationProgram:
    """The multiplier program for one constraint pool, reused across targets."""

    def __init__(
        self,
        rate_vars: Sequence[str],
        pool: Sequence[LinIneq],
        mode: RedundancyMode,
        extra_atoms: Iterable[EntropyAtom] = (),
        screens: Sequence[JointPmf] = (),
    ):
        self.rate_vars = list(rate_vars)
        self.pool = list(pool)
        self.mode = mode
        atoms = set(extra_atoms)
        for ineq in self.pool:
            atoms.update(ineq.constant.atoms)
        self.atoms = sorted(atoms)
        self.rate_row = {v: i for i, v in enumerate(self.rate_vars)}
        self.atom_row = {a: len(self.rate_vars) + i for i, a in enumerate(self.atoms)}
        self.const_row = len(self.rate_vars) + len(self.atoms)
        self.n_rows = self.const_row + 1
        shannon = mode is RedundancyMode.FARKAS_SHANNON
        self.pairs = _monotone_pairs(self.atoms) if shannon else []
        self.subs = _submodular_pairs(self.atoms) if shannon else []
        self.screen = _Screen(self.rate_vars, self.pool, screens) if screens else None

        rows, cols, vals = [], [], []

        def put(r, c, v):
            rows.append(r)
            cols.append(c)
            vals.append(v)

        for k, ineq in enumerate(self.pool):
            for v, c in ineq.coeffs.items():
                put(self.rate_row[v], k, c)
            for a, c in ineq.constant.terms.items():
                put(self.atom_row[a], k, c)
            if ineq.constant.constant:
                put(self.const_row, k, ineq.constant.constant)
        self.mu_offset = len(self.pool)
        for i, v in enumerate(self.rate_vars):
            put(self.rate_row[v], self.mu_offset + i, -1)
        self.nu_offset = self.mu_offset + len(self.rate_vars)
        for j, (s, t) in enumerate(self.pairs):
            put(self.atom_row[self.atoms[t]], self.nu_offset + j, 1)
            if s is not None:
                put(self.atom_row[self.atoms[s]], self.nu_offset + j, -1)
        self.xi_offset = self.nu_offset + len(self.pairs)
        for j, (a, b, union, meet) in enumerate(self.subs):
            col = self.xi_offset + j
            put(self.atom_row[self.atoms[a]], col, 1)
            put(self.atom_row[self.atoms[b]], col, 1)
            put(self.atom_row[self.atoms[union]], col, -1)
            if meet is not None:
                put(self.atom_row[self.atoms[meet]], col, -1)
        self.sigma = self.xi_offset + len(self.subs)
        put(self.const_row, self.sigma, 1)
        self.n_cols = self.sigma + 1
        self.matrix = sparse.csr_matrix(
            ([float(v) for v in vals], (rows, cols)), shape=(self.n_rows, self.n_cols)
        )
        self.columns: Dict[int, Dict[int, Fraction]] = {}
        for r, c, v in zip(rows, cols, vals):
            self.columns.setdefault(c, {})[r] = Fraction(v)

    def _rhs(self, target: LinIneq) -> Optional[np.ndarray]:
        b = np.zeros(self.n_rows)
        for v, c in target.coeffs.items():
            if v not in self.rate_row:
                return None
            b[self.rate_row[v]] = float(c)
        for a, c in target.constant.terms.items():
            if a not in self.atom_row:
                return None
            b[self.atom_row[a]] = float(c)
        b[self.const_row] = float(target.constant.constant)
        return b

    def screened_out(self, k: int, exclude: Iterable[int]) -> bool:
        """Pool member `k` is numerically necessary among the rest."""
        if self.screen is None:
            return False
        excluded = set(exclude) | {k}
        premises = [j for j in range(len(self.pool)) if j not in excluded]
        return self.screen.necessary(k, premises)

    def certify(self, target: LinIneq, exclude: Iterable[int] = ()) -> Optional[Certificate]:
        b = self._rhs(target)
        if b is None:
            return None
        bounds = [(0, None)] * self.n_cols
        for k in exclude:
            bounds[k] = (0, 0)
        result = linprog(
            np.ones(self.n_cols),
            A_eq=self.matrix,
            b_eq=b,
            bounds=bounds,
            method="highs",
        )
        if result.status != 0:
            return None
        x = np.where(np.abs(result.x) < ZERO_CUTOFF, 0.0, result.x)
        cert = self._rationalize(target, x)
        if cert is None:
            cert = self._solve_exact(target, x, exclude)
        return cert

    def _certificate(
        self,
        target: LinIneq,
        lam: Dict[int, Fraction],
        nu: Dict[int, Fraction],
        xi: Dict[int, Fraction],
    ) -> Optional[Certificate]:
        coeffs: Dict[str, Fraction] = {}
        c0 = Fraction(0)
        for k, value in lam.items():
            for v, c in self.pool[k].coeffs.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + value * c
            c0 += value * self.pool[k].constant.constant
        nonneg = []
        for v in self.rate_vars:
            mu = coeffs.get(v, Fraction(0)) - target.coeff(v)
            if mu < 0:
                return None
            if mu:
                nonneg.append((v, mu))
        slack = target.constant.constant - c0
        if slack < 0:
            return None
        monotone = tuple(
            (
                self.atoms[self.pairs[j][0]] if self.pairs[j][0] is not None else None,
                self.atoms[self.pairs[j][1]],
                value,
            )
            for j, value in sorted(nu.items())
        )
        submodular = tuple(
            (self.atoms[self.subs[j][0]], self.atoms[self.subs[j][1]], value)
            for j, value in sorted(xi.items())
        )
        cert = Certificate(
            target,
            tuple((self.pool[k], value) for k, value in sorted(lam.items())),
            tuple(nonneg),
            monotone,
            slack,
            submodular,
        )
        return cert if cert.verify() else None

    def _split(self, x: np.ndarray) -> Tuple[Dict[int, Fraction], ...]:
        def rational(lo: int, hi: int) -> Dict[int, Fraction]:
            return {
                k - lo: Fraction(float(x[k])).limit_denominator(MAX_DENOMINATOR)
                for k in range(lo, hi)
                if x[k] > 0
            }

        return (
            rational(0, self.mu_offset),
            rational(self.nu_offset, self.xi_offset),
            rational(self.xi_offset, self.sigma),
        )

    def _rationalize(self, target: LinIneq, x: np.ndarray) -> Optional[Certificate]:
        return self._certificate(target, *self._split(x))

    def _solve_exact(self, target: LinIneq, x: np.ndarray, exclude: Iterable[int]) -> Optional[Certificate]:
        """Solve the equality system exactly on the support of the LP solution."""
        excluded = set(exclude)
        support = [
            k
            for k in range(self.n_cols)
            if (x[k] > 0 or self.mu_offset <= k < self.nu_offset or k == self.sigma)
            and k not in excluded
        ]
        A = sympy.zeros(self.n_rows, len(support))
        for j, k in enumerate(support):
            for r, v in self.columns.get(k, {}).items():
                A[r, j] = sympy.Rational(v.numerator, v.denominator)
        b = self._exact_rhs(target)
        try:
            sol, params, free = A.gauss_jordan_solve(b, freevar=True)
        except ValueError:
            return None
        values = {}
        for p, i in zip(params, free):
            q = Fraction(float(x[support[i]])).limit_denominator(MAX_DENOMINATOR)
            values[p] = sympy.Rational(q.numerator, q.denominator)
        sol = sol.subs(values)
        lam: Dict[int, Fraction] = {}
        nu: Dict[int, Fraction] = {}
        xi: Dict[int, Fraction] = {}
        for value, k in zip(sol, support):
            q = Fraction(int(sympy.fraction(value)[0]), int(sympy.fraction(value)[1]))
            if q < 0:
                return None
            if not q:
                continue
            if k < self.mu_offset:
                lam[k] = q
            elif self.nu_offset <= k < self.xi_offset:
                nu[k - self.nu_offset] = q
            elif self.xi_offset <= k < self.sigma:
                xi[k - self.xi_offset] = q
        return self._certificate(target, lam, nu, xi)

    def _exact_rhs(self, target: LinIneq) -> "sympy.Matrix":
        b = [sympy.Integer(0)] * self.n_rows
        for v, c in target.coeffs.items():
            b[self.rate_row[v]] = sympy.Rational(c.numerator, c.denominator)
        for a, c in target.constant.terms.items():
            b[self.atom_row[a]] = sympy.Rational(c.numerator, c.denominator)
        c0 = target.constant.constant
        b[self.const_row] = sympy.Rational(c0.numerator, c0.denominator)
        return sympy.Matrix(b)


def implies(
    system: IneqSystem,
    target: LinIneq,
    mode: RedundancyMode = RedundancyMode.FARKAS_SHANNON,
    screens: Sequence[JointPmf] = (),
) -> Optional[Certificate]:
    """Certify that `system` (inside the nonnegative orthant) implies `target`.

    Arguments:
        system: Inequalities and assumptions used as premises.
        target: Inequality to prove; rate variables must be declared by
            `system`.
        mode: Whether Shannon inequalities may be used.
        screens: Joints at which a numeric counterexample is looked for
            before solving.

    Returns:
        A verified Certificate, or None when no certificate was found.
    """

    mode = RedundancyMode.parse(mode)
    if set(target.coeffs) - set(system.rate_vars):
        return None
    pool = list(system.all_constraints) + [target]
    program = _ImplicationProgram(system.rate_vars, pool, mode, screens=screens)
    last = len(pool) - 1
    if program.screened_out(last, ()):
        return None
    return program.certify(target, exclude=[last])


def remove_redundant(
    system: IneqSystem,
    mode: RedundancyMode = RedundancyMode.FARKAS_SHANNON,
    audit: Optional[List[Certificate]] = None,
    screens: Sequence[JointPmf] = (),
) -> IneqSystem:
    """Drop every inequality certified by the remaining ones.

    Inequalities with more terms are tried first; each removal is final, so
    later certificates never rely on removed inequalities. Inequalities
    without a certificate are kept.

    Arguments:
        system: Canonical system.
        mode: `farkas` uses rate nonnegativity only, `farkas+shannon` also
            uses the Shannon inequalities over the atoms present.
        audit: Optional list receiving the certificate of each removal.
        screens: Joints at which candidates are tested numerically first;
            a candidate needed at one of them is kept without solving.

    Returns:
        The irredundant system.
    """

    mode = RedundancyMode.parse(mode)
    pool = list(system.all_constraints)
    if len(pool) < 1:
        return system
    program = _ImplicationProgram(system.rate_vars, pool, mode, screens=screens)
    order = sorted(
        range(len(pool)),
        key=lambda k: (-len(pool[k].constant.terms), -len(pool[k].coeffs), -k),
    )
    removed = set()
    skipped = 0
    for k in order:
        if program.screened_out(k, removed):
            skipped += 1
            continue
        cert = program.certify(pool[k], exclude=removed | {k})
        if cert is not None:
            removed.add(k)
            if audit is not None:
                audit.append(cert)
            logger.debug("Removed redundant %s: %s", pool[k].tag or pool[k], cert)
    if removed or skipped:
        logger.debug(
            "Redundancy removal kept %d of %d constraints, %d screened",
            len(pool) - len(removed),
            len(pool),
            skipped,
        )
    kept = [pool[k] for k in range(len(pool)) if k not in removed]
    return system.replace(
        inequalities=[i for i in kept if not i.is_assumption],
        assumptions=[a for a in kept if a.is_assumption],
    )
