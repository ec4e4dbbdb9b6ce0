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

"""This module provides the built-in rate regions as exact inequality
systems.

Every system is transcribed by hand. Tags name the role of an inequality:
`r1.rx1` bounds R1 through receiver 1, `sum.cross12` is the sum-rate bound
mixing receiver 1 for transmitter 1 and receiver 2 for transmitter 2, and
so on.
"""

from fractions import Fraction
from typing import Dict, Iterator, List

from ..dist_core import FactorizationTemplate
from ..dsl import DslSyntaxError, parse_rate_sum
from ..info_measures import InfoExpr
from ..info_measures import cond_entropy_expr as H
from ..info_measures import mutual_info_expr as I
from ..pattern import Registry, RegistryException
from ..polyhedra import IneqSystem, LinIneq
from ..utils import as_fraction
from .spec import RegionException, RegionId, RegionSpec

__all__ = [
    "builtin_system",
    "builtin_ids",
    "SYSTEMS",
    "remark_assumption",
    "osrb_secrecy_family",
    "decodability_family",
    "THM7_AUXILIARY_RATES",
    "DEFAULT_TAU1",
    "DEFAULT_TAU2",
]

SYSTEMS = Registry("region")

DEFAULT_TAU1 = Fraction(7, 10)
DEFAULT_TAU2 = Fraction(3, 10)

THM7_AUXILIARY_RATES = ("Rt1", "Rt2", "Rt1'", "Rt2'", "Rt1''", "Rt2''")
APPB_AUXILIARY_RATES = ("R1_1", "R1_2", "R2_1", "R2_2")
# bin rates first: their elimination yields the covering condition directly
APPC_AUXILIARY_RATES = ("R1'", "R1''", "R2'", "R2''", "T1", "S1", "T2", "S2", "Rt1", "Rt2")


def _rates(text: str) -> Dict[str, Fraction]:
    try:
        return parse_rate_sum(text)
    except DslSyntaxError as e:
        raise RegionException(f"Bad rate sum {text!r}: {e.message}")


def _le(tag: str, lhs: str, rhs: InfoExpr) -> LinIneq:
    return LinIneq.le(_rates(lhs), rhs, tag)


def _ge(tag: str, lhs: str, rhs: InfoExpr) -> LinIneq:
    return LinIneq.ge(_rates(lhs), rhs, tag)


def _templ(*shapes: str) -> FactorizationTemplate:
    return FactorizationTemplate.parse(shapes)


def remark_assumption() -> LinIneq:
    """The covering condition on the auxiliaries of the weak-secrecy inner
    bound, as `0 <= slack`."""

    slack = (
        I("U1,V1", "Z", "U0,V0")
        + I("U2,V2", "Z", "U0,V0")
        - I("U1,U2,V1,V2", "Z", "U0,V0")
        - I("U1", "U2", "U0")
        - I("V1", "V2", "V0")
    )
    return LinIneq({}, slack, "covering")


WEAK_INNER_TEMPLATE = (
    "Q",
    "U0|Q",
    "U1,U2|U0",
    "V0|Q",
    "V1,V2|V0",
    "X1|U0,U1,U2",
    "X2|V0,V1,V2",
    "Y1,Y2,Z|X1,X2",
)

STRONG_TEMPLATE = (
    "Q",
    "U0,U1,U2|Q",
    "V0,V1,V2|Q",
    "X1|U0,U1,U2",
    "X2|V0,V1,V2",
    "Y1,Y2,Z|X1,X2",
)

MACWT_TEMPLATE = ("Q", "U|Q", "V|Q", "X1|U", "X2|V", "Y,Z|X1,X2")

DEGRADED_CHAIN = ("Y1|X1,X2", "Y2|Y1", "Z|Y2")


@SYSTEMS.register(RegionId.THM1_INNER.value)
def _weak_inner() -> RegionSpec:
    ineqs = [
        _le(
            "r1.rx1",
            "R1",
            I("U0,U1", "Y1", "Q,V0,V1") - I("U0", "Z", "Q") - I("U1", "Z", "Q,U0,V0"),
        ),
        _le(
            "r1.rx2",
            "R1",
            I("U0,U2", "Y2", "Q,V0,V2") - I("U0", "Z", "Q") - I("U2", "Z", "Q,U0,V0"),
        ),
        _le(
            "r2.rx1",
            "R2",
            I("V0,V1", "Y1", "Q,U0,U1") - I("V0", "Z", "Q") - I("V1", "Z", "Q,U0,V0"),
        ),
        _le(
            "r2.rx2",
            "R2",
            I("V0,V2", "Y2", "Q,U0,U2") - I("V0", "Z", "Q") - I("V2", "Z", "Q,U0,V0"),
        ),
        _le(
            "sum.rx1",
            "R1 + R2",
            I("U0,U1,V0,V1", "Y1", "Q") - I("U0,U1,V0,V1", "Z", "Q"),
        ),
        _le(
            "sum.rx2",
            "R1 + R2",
            I("U0,U2,V0,V2", "Y2", "Q") - I("U0,U2,V0,V2", "Z", "Q"),
        ),
        _le(
            "sum.cross12",
            "R1 + R2",
            I("U0,U1", "Y1", "Q,V0,V1")
            + I("V0,V2", "Y2", "Q,U0,U2")
            - I("U0,V0", "Z", "Q")
            - I("U1", "Z", "Q,U0,V0")
            - I("V2", "Z", "Q,U0,V0"),
        ),
        _le(
            "sum.cross21",
            "R1 + R2",
            I("V0,V1", "Y1", "Q,U0,U1")
            + I("U0,U2", "Y2", "Q,V0,V2")
            - I("U0,V0", "Z", "Q")
            - I("U2", "Z", "Q,U0,V0")
            - I("V1", "Z", "Q,U0,V0"),
        ),
    ]
    return RegionSpec(
        RegionId.THM1_INNER,
        IneqSystem(["R1", "R2"], ineqs, [remark_assumption()], RegionId.THM1_INNER.value),
        _templ(*WEAK_INNER_TEMPLATE),
        "inner",
        "Weak-secrecy inner bound of the two-transmitter two-receiver wiretap channel.",
    )


@SYSTEMS.register(RegionId.COR1_DEGRADED_INNER.value)
def _degraded_inner() -> RegionSpec:
    ineqs = [
        _le("r1", "R1", I("U0", "Y2", "V0,Q") - I("U0", "Z", "Q")),
        _le("r2", "R2", I("V0", "Y2", "U0,Q") - I("V0", "Z", "Q")),
        _le(
            "sum",
            "R1 + R2",
            I("U0,V0", "Y2", "Q") - I("U0", "Z", "Q") - I("V0", "Z", "Q"),
        ),
    ]
    return RegionSpec(
        RegionId.COR1_DEGRADED_INNER,
        IneqSystem(["R1", "R2"], ineqs, name=RegionId.COR1_DEGRADED_INNER.value),
        _templ("Q", "U0|Q", "V0|Q", "X1|U0", "X2|V0", *DEGRADED_CHAIN),
        "inner",
        "Inner bound for the degraded channel, auxiliaries collapsed to U0 and V0.",
    )


@SYSTEMS.register(RegionId.THM2_OUTER_DEGRADED.value)
def _degraded_outer() -> RegionSpec:
    ineqs = [
        _le("r1", "R1", I("U0", "Y2", "Q") - I("U0", "Z", "Q")),
        _le("r2", "R2", I("V0", "Y2", "Q") - I("V0", "Z", "Q")),
        _le("sum", "R1 + R2", I("U0,V0", "Y2", "Q") - I("U0,V0", "Z", "Q")),
    ]
    return RegionSpec(
        RegionId.THM2_OUTER_DEGRADED,
        IneqSystem(["R1", "R2"], ineqs, name=RegionId.THM2_OUTER_DEGRADED.value),
        _templ("Q", "U0,V0|Q", "X1|U0", "X2|V0", *DEGRADED_CHAIN),
        "outer",
        "Outer bound for the degraded channel with correlated auxiliaries.",
    )


@SYSTEMS.register(RegionId.THM3_SWITCH_CAPACITY.value)
def _switch_capacity() -> RegionSpec:
    y2, z = "Y2,S", "Z,S"
    ineqs = [
        _le("r1", "R1", I("U0", y2, "V0,Q") - I("U0", z, "Q")),
        _le("r2", "R2", I("V0", y2, "U0,Q") - I("V0", z, "Q")),
        _le("sum", "R1 + R2", I("U0,V0", y2, "Q") - I("U0,V0", z, "Q")),
    ]
    return RegionSpec(
        RegionId.THM3_SWITCH_CAPACITY,
        IneqSystem(["R1", "R2"], ineqs, name=RegionId.THM3_SWITCH_CAPACITY.value),
        _templ("Q", "U0|Q", "V0|Q", "X1|U0", "X2|V0", "S", "Y1|X1,X2,S", "Y2|Y1", "Z|Y2"),
        "capacity",
        "Capacity of the degraded switch channel; receivers observe the switch state S.",
    )


@SYSTEMS.register(RegionId.THM4_OUTER_GENERAL.value)
def _general_outer() -> RegionSpec:
    ineqs = [
        _le("r1", "R1", I("U0", "Y1,Y2", "Q") - I("U0", "Z", "Q")),
        _le("r2", "R2", I("V0", "Y1,Y2", "Q") - I("V0", "Z", "Q")),
        _le("sum", "R1 + R2", I("U0,V0", "Y1,Y2", "Q") - I("U0,V0", "Z", "Q")),
    ]
    return RegionSpec(
        RegionId.THM4_OUTER_GENERAL,
        IneqSystem(["R1", "R2"], ineqs, name=RegionId.THM4_OUTER_GENERAL.value),
        _templ("Q", "U0,V0|Q", "X1|U0", "X2|V0", "Y1,Y2,Z|X1,X2"),
        "outer",
        "General outer bound, both legitimate outputs pooled.",
    )


@SYSTEMS.register(RegionId.THM5_NOISELESS_SWITCH.value)
def _noiseless_switch(tau1=DEFAULT_TAU1, tau2=DEFAULT_TAU2) -> RegionSpec:
    tau1, tau2 = as_fraction(tau1), as_fraction(tau2)
    for name, tau in (("tau1", tau1), ("tau2", tau2)):
        if not 0 <= tau <= 1:
            raise RegionException(f"{name}={tau} is outside [0, 1].")
    gap = tau1 - tau2
    ineqs = [
        _le("r1.active", "R1", InfoExpr.atom("X1") * gap)
        if gap > 0
        else _le("r1.silent", "R1", InfoExpr.const(0)),
        _le("r2.active", "R2", InfoExpr.atom("X2") * -gap)
        if gap < 0
        else _le("r2.silent", "R2", InfoExpr.const(0)),
    ]
    return RegionSpec(
        RegionId.THM5_NOISELESS_SWITCH,
        IneqSystem(["R1", "R2"], ineqs, name=RegionId.THM5_NOISELESS_SWITCH.value),
        _templ("X1", "X2", "S1", "S2", "Y1|X1,X2,S1", "Y2|Y1", "Z|X1,X2,S2"),
        "capacity",
        "Capacity of the noiseless switch channel, (tau1 - tau2)+ H(X1) and (tau2 - tau1)+ H(X2).",
        params={"tau1": tau1, "tau2": tau2},
    )


def _cond(*names: str) -> str:
    return ",".join(names)


def osrb_secrecy_family() -> List[LinIneq]:
    """All fifteen binning-secrecy inequalities over the bins W1, F1, W2, F2.

    A nonempty subset of bins with rate sum r gets r <= H(U0|Z) when it holds
    only transmitter-1 bins, H(V0|Z) for only transmitter-2 bins and
    H(U0,V0|Z) otherwise. Three of them are the `secrecy.*` inequalities of
    the strong-secrecy system.
    """

    bins = (("R1", 1), ("Rt1", 1), ("R2", 2), ("Rt2", 2))
    out = []
    for mask in range(1, 16):
        chosen = [bins[i] for i in range(4) if mask >> i & 1]
        owners = {o for _, o in chosen}
        if owners == {1}:
            rhs = H("U0", "Z")
        elif owners == {2}:
            rhs = H("V0", "Z")
        else:
            rhs = H("U0,V0", "Z")
        lhs = " + ".join(n for n, _ in chosen)
        out.append(_le(f"osrb.{mask}", lhs, rhs))
    return out


def _strong_secrecy(j_pairs=(1, 2)) -> List[LinIneq]:
    base = "U0,V0,Z"
    ineqs = [
        _le("secrecy.t1", "R1 + Rt1", H("U0", "Z")),
        _le("secrecy.t2", "R2 + Rt2", H("V0", "Z")),
        _le("secrecy.both", "R1 + Rt1 + R2 + Rt2", H("U0,V0", "Z")),
    ]
    for j in (1, 2):
        ineqs.append(_le(f"private.u{j}", f"Rt{j}'", H(f"U{j}", base)))
        ineqs.append(_le(f"private.v{j}", f"Rt{j}''", H(f"V{j}", base)))
    for j in j_pairs:
        ineqs.append(_le(f"private.u1v{j}", f"Rt1' + Rt{j}''", H(_cond("U1", f"V{j}"), base)))
        ineqs.append(_le(f"private.u2v{j}", f"Rt2' + Rt{j}''", H(_cond("U2", f"V{j}"), base)))
    return ineqs


def _strong_private_rest() -> List[LinIneq]:
    base = "U0,V0,Z"
    ineqs = [
        _le("private.u1u2", "Rt1' + Rt2'", H("U1,U2", base)),
        _le("private.v1v2", "Rt1'' + Rt2''", H("V1,V2", base)),
    ]
    for j in (1, 2):
        ineqs.append(
            _le(f"private.u1u2v{j}", f"Rt1' + Rt2' + Rt{j}''", H(_cond("U1,U2", f"V{j}"), base))
        )
        ineqs.append(
            _le(f"private.u{j}v1v2", f"Rt{j}' + Rt1'' + Rt2''", H(_cond(f"U{j}", "V1,V2"), base))
        )
    ineqs.append(_le("private.all", "Rt1' + Rt2' + Rt1'' + Rt2''", H("U1,U2,V1,V2", base)))
    return ineqs


def decodability_family(j: int) -> Dict[str, LinIneq]:
    """The twelve decodability inequalities at receiver `j`, keyed by role.

    Keys: "u", "v", "uv", "t1u", "t2u", "t1v", "t2v", "t1uv", "t1t2u",
    "t1t2v", "t2uv", "all". Of these "t1u", "t2v" and "all" enter the
    strong-secrecy system; "t2u", "t1v", "t1t2u" and "t1t2v" are implied by
    "u", "v", "t1u" and "t2v" respectively.
    """

    if j not in (1, 2):
        raise RegionException(f"Receiver index must be 1 or 2, got {j}.")
    u, v, y = f"U{j}", f"V{j}", f"Y{j}"
    a, b = f"Rt{j}'", f"Rt{j}''"
    spec = {
        "u": (f"{a}", H(u, _cond("U0", "V0", v, y))),
        "v": (f"{b}", H(v, _cond("U0", u, "V0", y))),
        "uv": (f"{a} + {b}", H(_cond(u, v), _cond("U0", "V0", y))),
        "t1u": (f"Rt1 + {a}", H(_cond("U0", u), _cond("V0", v, y))),
        "t2u": (f"Rt2 + {a}", H(u, _cond("U0", "V0", v, y))),
        "t1v": (f"Rt1 + {b}", H(v, _cond("U0", u, "V0", y))),
        "t2v": (f"Rt2 + {b}", H(_cond("V0", v), _cond("U0", u, y))),
        "t1uv": (f"Rt1 + {a} + {b}", H(_cond("U0", u, v), _cond("V0", y))),
        "t1t2u": (f"Rt1 + {a} + Rt2", H(_cond("U0", u), _cond("V0", v, y))),
        "t1t2v": (f"Rt1 + {b} + Rt2", H(_cond("V0", v), _cond("U0", u, y))),
        "t2uv": (f"{a} + Rt2 + {b}", H(_cond(u, "V0", v), _cond("U0", y))),
        "all": (f"Rt1 + {a} + Rt2 + {b}", H(_cond("U0", u, "V0", v), y)),
    }
    return {k: _ge(f"decode{j}.{k}", lhs, rhs) for k, (lhs, rhs) in spec.items()}


def _strong_decoding() -> List[LinIneq]:
    out = []
    for j in (1, 2):
        family = decodability_family(j)
        out.extend(family[k] for k in ("t1u", "t2v", "all"))
    return out


STRONG_RATES = ("R1", "R2") + THM7_AUXILIARY_RATES


@SYSTEMS.register(RegionId.THM7_STRONG_RAW.value)
def _strong_raw() -> RegionSpec:
    ineqs = _strong_secrecy() + _strong_private_rest() + _strong_decoding()
    return RegionSpec(
        RegionId.THM7_STRONG_RAW,
        IneqSystem(STRONG_RATES, ineqs, name=RegionId.THM7_STRONG_RAW.value),
        _templ(*STRONG_TEMPLATE),
        "raw",
        "Strong-secrecy inner bound before elimination of the binning rates.",
        eliminate=THM7_AUXILIARY_RATES,
    )


@SYSTEMS.register(RegionId.THM7_STRONG_REDUCED.value)
def _strong_reduced() -> RegionSpec:
    secrecy = _strong_secrecy(j_pairs=())
    secrecy += [
        _le("private.u1v1", "Rt1' + Rt1''", H("U1,V1", "U0,V0,Z")),
        _le("private.u2v2", "Rt2' + Rt2''", H("U2,V2", "U0,V0,Z")),
    ]
    return RegionSpec(
        RegionId.THM7_STRONG_REDUCED,
        IneqSystem(
            STRONG_RATES,
            secrecy + _strong_decoding(),
            [remark_assumption()],
            RegionId.THM7_STRONG_REDUCED.value,
        ),
        _templ(*STRONG_TEMPLATE),
        "raw",
        "Strong-secrecy subset compared with the weak-secrecy inner bound.",
        eliminate=THM7_AUXILIARY_RATES,
        published=RegionId.THM1_INNER,
    )


def _macwt_inequalities() -> List[LinIneq]:
    return [
        _le("r1", "R1", I("U", "Y", "Q,V") - I("U", "Z", "Q")),
        _le("r2", "R2", I("V", "Y", "Q,U") - I("V", "Z", "Q")),
        _le("sum", "R1 + R2", I("U,V", "Y", "Q") - I("U,V", "Z", "Q")),
    ]


@SYSTEMS.register(RegionId.THM8_MACWT.value)
def _macwt() -> RegionSpec:
    ineqs = _macwt_inequalities() + [
        _ge("dummy1", "Rd1", I("U", "Z", "Q") + I("X1", "Z", "Q,U,V")),
        _ge("dummy2", "Rd2", I("V", "Z", "Q") + I("X2", "Z", "Q,U,V")),
        _ge("dummy.sum", "Rd1 + Rd2", I("U,V", "Z", "Q") + I("X1,X2", "Z", "Q,U,V")),
    ]
    return RegionSpec(
        RegionId.THM8_MACWT,
        IneqSystem(["R1", "Rd1", "R2", "Rd2"], ineqs, name=RegionId.THM8_MACWT.value),
        _templ(*MACWT_TEMPLATE),
        "inner",
        "Multiple access wiretap channel with dummy-message randomness rates Rd1, Rd2.",
    )


@SYSTEMS.register(RegionId.APPB_RAW.value)
def _macwt_raw() -> RegionSpec:
    ineqs = [
        _le("decode.t1", "R1 + R1_1", I("U", "Y", "Q,V")),
        _le("decode.t2", "R2 + R2_1", I("V", "Y", "Q,U")),
        _le("decode.both", "R1 + R1_1 + R2 + R2_1", I("U,V", "Y", "Q")),
        _ge("cover.u", "R1_1", I("U", "Z", "Q")),
        _ge("cover.v", "R2_1", I("V", "Z", "Q")),
        _ge("cover.uv", "R1_1 + R2_1", I("U,V", "Z", "Q")),
        _ge("cover.x1", "R1_2", I("X1", "Z", "Q,U,V")),
        _ge("cover.x2", "R2_2", I("X2", "Z", "Q,U,V")),
        _ge("cover.x1x2", "R1_2 + R2_2", I("X1,X2", "Z", "Q,U,V")),
        _le("split1.upper", "Rd1 - R1_1 - R1_2", InfoExpr.const(0)),
        _ge("split1.lower", "Rd1 - R1_1 - R1_2", InfoExpr.const(0)),
        _le("split2.upper", "Rd2 - R2_1 - R2_2", InfoExpr.const(0)),
        _ge("split2.lower", "Rd2 - R2_1 - R2_2", InfoExpr.const(0)),
    ]
    rates = ("R1", "Rd1", "R2", "Rd2") + APPB_AUXILIARY_RATES
    return RegionSpec(
        RegionId.APPB_RAW,
        IneqSystem(rates, ineqs, name=RegionId.APPB_RAW.value),
        _templ(*MACWT_TEMPLATE),
        "raw",
        "Multiple access wiretap constraints with split dummy messages.",
        eliminate=APPB_AUXILIARY_RATES,
        published=RegionId.THM8_MACWT,
    )


@SYSTEMS.register(RegionId.APPC_RAW.value)
def _weak_inner_raw() -> RegionSpec:
    zc = "Q,U0,V0"
    ineqs = [
        _le("encode.u", "R1' + R1'' - T1 - T2", -I("U1", "U2", "U0")),
        _le("encode.v", "R2' + R2'' - S1 - S2", -I("V1", "V2", "V0")),
        _le("decode1.t1", "Rt1 + T1", I("U0,U1", "Y1", "Q,V0,V1")),
        _le("decode1.t2", "Rt2 + S1", I("V0,V1", "Y1", "Q,U0,U1")),
        _le("decode1.both", "Rt1 + T1 + Rt2 + S1", I("U0,U1,V0,V1", "Y1", "Q")),
        _le("decode2.t1", "Rt1 + T2", I("U0,U2", "Y2", "Q,V0,V2")),
        _le("decode2.t2", "Rt2 + S2", I("V0,V2", "Y2", "Q,U0,U2")),
        _le("decode2.both", "Rt1 + T2 + Rt2 + S2", I("U0,U2,V0,V2", "Y2", "Q")),
        _ge("leak.common", "Rt1 - R1 + Rt2 - R2", I("U0,V0", "Z", "Q")),
        _ge("leak.u0", "Rt1 - R1", I("U0", "Z", "Q")),
        _ge("leak.v0", "Rt2 - R2", I("V0", "Z", "Q")),
        _ge("leak.rx1", "T1 + S1", I("U1,V1", "Z", zc)),
        _ge("leak.u1", "T1", I("U1", "Z", zc)),
        _ge("leak.v1", "S1", I("V1", "Z", zc)),
        _ge("leak.rx2", "T2 + S2", I("U2,V2", "Z", zc)),
        _ge("leak.u2", "T2", I("U2", "Z", zc)),
        _ge("leak.v2", "S2", I("V2", "Z", zc)),
        _le(
            "leak.private",
            "T1 + S1 + T2 + S2 - R1' - R1'' - R2' - R2''",
            I("U1,V1", "Z", zc) + I("U2,V2", "Z", zc) - I("U1,U2,V1,V2", "Z", "U0,V0"),
        ),
    ]
    rates = ("R1", "R2") + APPC_AUXILIARY_RATES
    return RegionSpec(
        RegionId.APPC_RAW,
        IneqSystem(rates, ineqs, name=RegionId.APPC_RAW.value),
        _templ(*WEAK_INNER_TEMPLATE),
        "raw",
        "Weak-secrecy constraints before elimination of codebook and binning rates.",
        eliminate=APPC_AUXILIARY_RATES,
        published=RegionId.THM1_INNER,
    )


def builtin_ids() -> Iterator[str]:
    return SYSTEMS.names()


def builtin_system(region, **params) -> RegionSpec:
    """Return a built-in region by id.

    Arguments:
        region: A RegionId or its name.
        params: Region parameters, tau1 and tau2 for THM5_NOISELESS_SWITCH.

    Returns:
        A fresh RegionSpec.

    Raises:
        RegionException: If the id is unknown or parameters are invalid.

    Examples:
       >>> spec = builtin_system("THM5_NOISELESS_SWITCH", tau1="7/10", tau2="3/10")
       >>> print(spec.system)
    """

    region = RegionId.parse(region)
    try:
        return SYSTEMS.get(region.value, **params)
    except RegistryException as e:
        raise RegionException(str(e))
    except (TypeError, ValueError) as e:
        raise RegionException(f"Invalid parameters for {region.value}: {e}")
