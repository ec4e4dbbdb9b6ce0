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

"""This module provides the text format of inequality systems.

One inequality per line::

    # comment
    name: THM1_INNER
    rates: R1, R2
    r1.rx1: R1 <= I(U0,U1;Y1|Q,V0,V1) - I(U0;Z|Q) - I(U1;Z|Q,U0,V0)
    R1 + R2 >= 1/2*H(X1) - 1

Either side may mix rate variables, `H(A|C)` and `I(A;B|C)` terms and
rational constants; terms take optional coefficients such as `2*`, `1/2`
or `0.5`. Rate variables are declared by first use unless a `rates:`
directive lists them. Lines without rate variables become assumptions.
Comments, tags and directives are split off per line; the rest is parsed
with a lark LALR grammar.
"""

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from lark import Lark, Token, Transformer, UnexpectedCharacters, UnexpectedInput
from lark.exceptions import VisitError

from .info_measures import InfoExpr, InfoMeasureException, cond_entropy_expr, mutual_info_expr
from .polyhedra import IneqSystem, LinIneq, PolyhedraException
from .utils import as_fraction

__all__ = [
    "DslSyntaxError",
    "parse_system",
    "parse_inequality",
    "parse_rate_sum",
    "format_system",
    "load_system",
]


class DslSyntaxError(Exception):
    """Exception raised by the inequality parser, with a 1-based location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


GRAMMAR = r"""
    inequality: side RELOP side
    rate_list: NAME (","? NAME)*

    side: signed (SIGN term)*
    signed: SIGN? term

    term: NUMBER "*"? atom  -> scaled
        | NUMBER            -> number
        | atom              -> plain

    atom: NAME "(" varlist (SEMI varlist)? (BAR varlist)? ")"  -> measure
        | NAME                                               -> rate

    varlist: NAME ("," NAME)*

    RELOP: "<=" | ">="
    SIGN: "+" | "-"
    SEMI: ";"
    BAR: "|"
    NUMBER: /\d+(\.\d+)?(\/\d+)?/
    NAME: /[A-Za-z][A-Za-z0-9_]*'*/

    %import common.WS_INLINE
    %ignore WS_INLINE
"""

_PARSER = Lark(GRAMMAR, start=["inequality", "rate_list", "side"], parser="lalr")

TAG_RE = re.compile(r"^\s*([A-Za-z0-9_.+\-']+)\s*:")
DIRECTIVES = ("rates", "name")

_Terms = Tuple[Dict[str, Fraction], InfoExpr]


def _scale(terms: _Terms, factor: Fraction) -> _Terms:
    rates, expr = terms
    return {v: c * factor for v, c in rates.items()}, expr * factor


class _Builder(Transformer):
    """Turns a parse tree into rate coefficients and an information
    expression, reporting columns shifted by `offset`."""

    def __init__(self, line: int, offset: int):
        super().__init__()
        self.line = line
        self.offset = offset

    def error(self, message: str, token: Token) -> DslSyntaxError:
        return DslSyntaxError(message, self.line, self.offset + token.column)

    def varlist(self, names):
        found = tuple(str(n) for n in names)
        if len(set(found)) != len(found):
            raise self.error(f"Repeated variable in {list(found)}.", names[0])
        return found, names[0]

    def measure(self, children):
        head, (a, first) = children[0], children[1]
        parts = {"": a}
        rest = children[2:]
        for sep, (names, start) in zip(rest[::2], rest[1::2]):
            seen = [v for p in parts.values() for v in p]
            common = sorted(set(seen) & set(names))
            if common:
                raise self.error(f"Overlapping arguments {common}.", start)
            parts[str(sep)] = names
        if head == "I" and ";" not in parts:
            raise self.error("I( ) needs two arguments separated by ';'.", head)
        if head == "H" and ";" in parts:
            raise self.error("H( ) takes one argument before '|'.", head)
        if head not in ("H", "I"):
            raise self.error(f"Unknown measure {str(head)!r}.", head)
        try:
            if head == "I":
                expr = mutual_info_expr(a, parts[";"], parts.get("|", ()))
            else:
                expr = cond_entropy_expr(a, parts.get("|", ()))
        except InfoMeasureException as e:
            raise self.error(str(e), first)
        return {}, expr

    def rate(self, children):
        return {str(children[0]): Fraction(1)}, InfoExpr()

    def _number(self, token: Token) -> Fraction:
        try:
            return as_fraction(str(token))
        except (ValueError, ZeroDivisionError):
            raise self.error(f"Invalid number {str(token)!r}.", token)

    def number(self, children):
        return {}, InfoExpr.const(self._number(children[0]))

    def scaled(self, children):
        return _scale(children[-1], self._number(children[0]))

    def plain(self, children):
        return children[0]

    def signed(self, children):
        term = children[-1]
        if len(children) == 2 and children[0] == "-":
            return _scale(term, Fraction(-1))
        return term

    def side(self, children):
        rates: Dict[str, Fraction] = {}
        expr = InfoExpr()
        pairs = [(None, children[0])] + list(zip(children[1::2], children[2::2]))
        for sign, (r, e) in pairs:
            factor = Fraction(-1) if sign == "-" else Fraction(1)
            for v, c in r.items():
                rates[v] = rates.get(v, Fraction(0)) + factor * c
            expr = expr + e * factor
        return rates, expr

    def rate_list(self, names):
        return [str(n) for n in names]

    def inequality(self, children):
        (left_rates, left), op, (right_rates, right) = children
        order = list(dict.fromkeys(list(left_rates) + list(right_rates)))
        # canonical: rates on the left, information terms on the right
        coeffs = {v: left_rates.get(v, 0) - right_rates.get(v, 0) for v in order}
        return coeffs, right - left, op, order


def _parse(text: str, start: str, line: int, offset: int):
    try:
        tree = _PARSER.parse(text, start=start)
        return _Builder(line, offset).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, DslSyntaxError):
            raise e.orig_exc
        raise
    except UnexpectedInput as e:
        column = e.column if isinstance(e.column, int) and e.column > 0 else len(text) + 1
        if isinstance(e, UnexpectedCharacters):
            message = f"Unexpected character {text[e.pos_in_stream]!r}."
        else:
            token = getattr(e, "token", None)
            found = str(token) if token else "end of line"
            expected = ", ".join(sorted(getattr(e, "expected", ()) or ())) or "more input"
            message = f"Unexpected {found!r}, expected {expected}."
        raise DslSyntaxError(message, line, offset + column) from None


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def parse_inequality(text: str, line: int = 1) -> Tuple[LinIneq, List[str]]:
    """Parse one inequality line.

    Returns:
        The canonical inequality and the rate variables in order of use.

    Raises:
        DslSyntaxError: On a syntax error.
    """

    body = _strip_comment(text)
    tag, offset = "", 0
    m = TAG_RE.match(body)
    if m:
        tag, offset = m.group(1), m.end()
    coeffs, constant, op, order = _parse(body[offset:], "inequality", line, offset)
    try:
        if op == "<=":
            ineq = LinIneq(coeffs, constant, tag)
        else:
            ineq = LinIneq.ge(coeffs, constant, tag)
    except PolyhedraException as e:
        raise DslSyntaxError(str(e), line, offset + op.column)
    return ineq, order


def parse_rate_sum(text: str) -> Dict[str, Fraction]:
    """Coefficients of a signed sum of rate variables such as
    `R1' + R1'' - T1`.

    Raises:
        DslSyntaxError: On a syntax error or an information term.
    """

    rates, expr = _parse(text, "side", 1, 0)
    if expr.terms or expr.constant:
        raise DslSyntaxError(f"Not a sum of rate variables: {text!r}.", 1, 1)
    return rates


def parse_system(text: str, name: str = "") -> IneqSystem:
    """Parse a system in the inequality format.

    Arguments:
        text: Source text.
        name: Default system name, overridden by a `name:` directive.

    Returns:
        The canonical IneqSystem; `>=` lines are normalized to `<=`.

    Raises:
        DslSyntaxError: On a syntax error, with line and column.

    Examples:
       >>> s = parse_system("R1 <= I(X;Y)\\nR1 >= 0")
       >>> str(s.inequalities[0])
       'R1 <= H(X) + H(Y) - H(X,Y)'
    """

    declared: Optional[List[str]] = None
    declared_at = 0
    first_use: Dict[str, int] = {}
    ineqs: List[LinIneq] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        m = TAG_RE.match(body)
        if m and m.group(1) in DIRECTIVES:
            if m.group(1) == "name":
                name = body[m.end() :].strip()
                continue
            names = _parse(body[m.end() :], "rate_list", number, m.end())
            declared = (declared or []) + names
            declared_at = number
            continue
        ineq, order = parse_inequality(body, number)
        for v in order:
            first_use.setdefault(v, number)
        ineqs.append(ineq)

    if declared is not None:
        undeclared = [v for v in first_use if v not in declared]
        if undeclared:
            line = first_use[undeclared[0]]
            raise DslSyntaxError(f"Undeclared rate variables {undeclared}.", line, 1)
        rate_vars = list(declared)
    else:
        rate_vars = list(first_use)
    try:
        return IneqSystem(rate_vars, ineqs, name=name)
    except PolyhedraException as e:
        raise DslSyntaxError(str(e), declared_at or 1, 1)


def format_system(system: IneqSystem) -> str:
    """Render a system in the inequality format; `parse_system` reads it
    back to an equal system."""

    lines = []
    if system.name:
        lines.append(f"name: {system.name}")
    lines.append("rates: " + ", ".join(system.rate_vars))
    for ineq in system.all_constraints:
        prefix = f"{ineq.tag}: " if ineq.tag and TAG_RE.match(ineq.tag + ":") else ""
        lines.append(f"{prefix}{ineq}")
    return "\n".join(lines) + "\n"


def load_system(path: str) -> IneqSystem:
    """Read a system file.

    Raises:
        DslSyntaxError: On a syntax error.
        OSError: If the file can not be read.
    """

    with open(path) as fp:
        return parse_system(fp.read())
