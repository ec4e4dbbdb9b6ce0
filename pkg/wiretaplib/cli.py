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

"""This module provides the `wiretap` command line.

Exit codes: 0 on success, 2 when an evaluated region violates one of its
assumptions, 1 on any error.
"""

import argparse
import json
import logging
import os.path as op
import sys
import traceback
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .artifacts import dump_csv, dump_json
from .codebook_sim import (
    BinningConfig,
    Lemma1Config,
    SimulationException,
    lemma1_csv_rows,
    run_osrb_tv,
    sweep_lemma1,
)
from .config import (
    ConfigException,
    build_channel,
    build_joint,
    get_flag,
    load_config,
    parse_params,
    search_config,
)
from .dist_core import compose_joint
from .dsl import format_system, load_system
from .log import Logs
from .polyhedra import IneqSystem, RedundancyMode, fm_project, symbolic_equal
from .regions import (
    RegionEnvelope,
    RegionException,
    RegionId,
    builtin_ids,
    builtin_system,
    compare_bounds,
    default_observations,
    evaluate,
    screening_joints,
    search_envelope,
)

__all__ = ["EXIT_OK", "EXIT_ERROR", "EXIT_ASSUMPTION", "build_parser", "main"]

logger = Logs().get_logger("cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ASSUMPTION = 2

TRACE_HEADER = ("n", "metric", "value", "trials")


def _check_files(*paths: Optional[str]):
    for path in paths:
        if path is not None and not op.isfile(path):
            raise ConfigException(f"No such file: {path}.")


def _is_builtin(name: str) -> bool:
    return str(name).strip().upper() in set(builtin_ids())


def _sibling(path: str, suffix: str) -> str:
    return op.splitext(path)[0] + suffix


def _parse_kv(pairs: Sequence[str]) -> dict:
    params = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigException(f"Expected key=value, got {pair!r}.")
        params[key.strip()] = value.strip()
    return parse_params(params)


def _resolve_system(name: str, params: dict) -> Tuple[IneqSystem, Optional[object]]:
    """System of a built-in id or a system file, with its RegionSpec."""
    if _is_builtin(name):
        spec = builtin_system(name, **params)
        return spec.system, spec
    _check_files(name)
    return load_system(name), None


def cmd_derive(args) -> int:
    params = _parse_kv(args.param)
    system, spec = _resolve_system(args.raw, params)
    if args.eliminate:
        order = [v.strip() for v in args.eliminate.split(",") if v.strip()]
    elif spec is not None:
        order = list(spec.eliminate)
    else:
        raise ConfigException("--eliminate is required for a system file.")
    if not order:
        raise ConfigException(f"{args.raw} has no auxiliary rates to eliminate.")
    unknown = [v for v in order if v not in system.rate_vars]
    if unknown:
        raise ConfigException(f"Can not eliminate unknown rates {unknown}.")
    mode = RedundancyMode.parse(args.mode)
    audit: list = []
    screens = screening_joints(spec.template) if spec is not None else []
    derived, stats = fm_project(system, order, mode, audit, screens=screens)
    derived = derived.replace(name=f"{system.name or 'system'}.derived")

    target_name = args.target or (spec.published.value if spec is not None and spec.published else None)
    verdict = None
    if target_name:
        target, _ = _resolve_system(target_name, params)
        if set(target.rate_vars) != set(derived.rate_vars):
            logger.warning(
                "Target %s has rates %s, derived system has %s",
                target_name,
                list(target.rate_vars),
                list(derived.rate_vars),
            )
        else:
            verdict = symbolic_equal(derived, target, mode, screens)

    sys.stdout.write(format_system(derived))
    if verdict is not None:
        sys.stdout.write(f"# equal to {target_name}: {verdict.equal}\n")
        if verdict.witness is not None:
            sys.stdout.write(f"# witness ({verdict.side}): {verdict.witness}\n")
    if args.out:
        dump_json(
            args.out,
            {
                "source": args.raw,
                "eliminate": order,
                "mode": mode.value,
                "steps": [str(s) for s in stats],
                "system": derived.to_json(),
                "certificates": [c.to_json() for c in audit],
                "target": target_name,
                "verdict": verdict.to_json() if verdict is not None else None,
            },
        )
    return EXIT_OK


def cmd_eval(args) -> int:
    _check_files(args.config)
    cfg = load_config(args.config, required=["region"])
    params = parse_params(cfg.get("params"))
    observations = cfg.get("observations")
    if "distribution" in cfg:
        joint_source = build_joint(cfg["distribution"])
    elif "channel" in cfg:
        channel = build_channel(cfg["channel"])
        joint_source = compose_joint(channel)
        if observations is None:
            observations = default_observations(channel)
    else:
        raise ConfigException("Configuration needs a 'distribution' or a 'channel'.")
    ev = evaluate(
        cfg["region"],
        joint_source,
        observations=observations,
        substitution=cfg.get("substitution"),
        params=params,
        enforce_assumptions=get_flag(cfg, "enforce_assumptions"),
    )
    region = ev.region
    rows = [list(v) for v in region.vertices]
    sys.stdout.write(",".join(region.rate_vars) + "\n")
    for row in rows:
        sys.stdout.write(",".join(repr(x) for x in row) + "\n")
    if args.out:
        dump_csv(args.out, region.rate_vars, rows)
        dump_json(_sibling(args.out, ".json"), ev.to_json())
    return EXIT_ASSUMPTION if ev.flagged else EXIT_OK


def cmd_search(args) -> int:
    _check_files(args.channel, args.config)
    cfg = load_config(args.config) if args.config else {}
    channel = _load_channel(args.channel)
    region = args.region or cfg.get("region")
    if not region:
        raise ConfigException("A region is required, by --region or in the configuration.")
    config = search_config(cfg.get("search"), args.seed)
    envelope = search_envelope(
        region,
        channel,
        config,
        observations=cfg.get("observations"),
        params=parse_params(cfg.get("params")),
        convexify_result=args.convexify or get_flag(cfg, "convexify"),
    )
    rows = envelope.csv_rows()
    for row in rows:
        sys.stdout.write(",".join(str(x) for x in row) + "\n")
    if args.out:
        dump_csv(args.out, rows[0], rows[1:])
        dump_json(_sibling(args.out, ".json"), envelope.to_json())
    return EXIT_OK


def _read_json(path: str):
    with open(path) as fp:
        try:
            return json.load(fp)
        except ValueError as e:
            raise ConfigException(f"{path} is not valid JSON: {e}.")


def _load_channel(path: str):
    """Channel from a bare channel object or a configuration with a
    `channel` section."""
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise ConfigException(f"{path} must hold a JSON object.")
    if "kind" not in obj and "channel" in obj:
        obj = obj["channel"]
    return build_channel(obj)


def cmd_compare(args) -> int:
    _check_files(args.inner, args.outer)
    inner = RegionEnvelope.from_json(_read_json(args.inner))
    outer = RegionEnvelope.from_json(_read_json(args.outer))
    report = compare_bounds(inner, outer)
    sys.stdout.write(
        f"contained: {report.contained}\nmax_violation: {report.max_violation!r}\n"
    )
    for direction, gap in report.gaps:
        sys.stdout.write(f"gap {direction[0]:.4f},{direction[1]:.4f}: {gap!r}\n")
    if args.out:
        dump_json(args.out, report.to_json())
    return EXIT_OK


def _blocklengths(cfg: dict, default: int) -> List[int]:
    values = cfg.get("blocklengths") or [default]
    try:
        return [int(n) for n in values]
    except (TypeError, ValueError):
        raise ConfigException("'blocklengths' must be a list of integers.")


def cmd_simulate_lemma1(args) -> int:
    _check_files(args.config)
    cfg = load_config(args.config, required=["lemma1"])
    section = dict(cfg["lemma1"])
    if args.seed is not None:
        section["seed"] = args.seed
    try:
        lemma = Lemma1Config.from_json(section)
    except SimulationException as e:
        raise ConfigException(str(e))
    results = sweep_lemma1(lemma, _blocklengths(cfg, lemma.n))
    rows = lemma1_csv_rows(results)
    for row in rows:
        sys.stdout.write(",".join(str(x) for x in row) + "\n")
    if args.out:
        dump_csv(args.out, TRACE_HEADER, rows)
        dump_json(_sibling(args.out, ".json"), [r.to_json() for r in results])
    return EXIT_OK


def cmd_simulate_osrb(args) -> int:
    _check_files(args.config)
    cfg = load_config(args.config, required=["binning"])
    section = dict(cfg["binning"])
    if args.seed is not None:
        section["seed"] = args.seed
    try:
        binning = BinningConfig.from_json(section)
    except SimulationException as e:
        raise ConfigException(str(e))
    trace = run_osrb_tv(binning, _blocklengths(cfg, binning.n))
    rows = trace.csv_rows()
    for row in rows:
        sys.stdout.write(",".join(str(x) for x in row) + "\n")
    sys.stdout.write(f"# trend: {trace.trend()!r}\n")
    if args.out:
        dump_csv(args.out, TRACE_HEADER, rows)
        dump_json(_sibling(args.out, ".json"), trace.to_json())
    return EXIT_OK


def cmd_builtin(args) -> int:
    if args.list:
        for region_id in builtin_ids():
            spec = builtin_system(region_id)
            sys.stdout.write(f"{region_id}\t{spec.kind}\t{spec.description}\n")
        return EXIT_OK
    spec = builtin_system(args.emit, **_parse_kv(args.param))
    text = format_system(spec.system)
    if args.out:
        dump_json(args.out, spec.to_json())
    sys.stdout.write(text)
    return EXIT_OK


def cmd_parse(args) -> int:
    _check_files(args.file)
    system = load_system(args.file)
    sys.stdout.write(format_system(system))
    if args.out:
        dump_json(args.out, system.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiretap",
        description="Derive, evaluate and validate secrecy rate regions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level.",
    )
    parser.add_argument("--log-dir", default=None, help="Write rotating log files here.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="Eliminate auxiliary rates of a raw system.")
    p.add_argument("--raw", required=True, help="Built-in id or system file.")
    p.add_argument("--eliminate", default=None, help="Comma separated rates.")
    p.add_argument(
        "--mode",
        default=RedundancyMode.FARKAS_SHANNON.value,
        choices=[m.value for m in RedundancyMode],
    )
    p.add_argument("--target", default=None, help="Built-in id or system file to compare with.")
    p.add_argument("--param", action="append", default=[], help="Region parameter key=value.")
    p.add_argument("--out", default=None, help="JSON output.")
    p.set_defaults(handler=cmd_derive)

    p = sub.add_parser("eval", help="Evaluate a region at one distribution.")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="CSV output, JSON written alongside.")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("search", help="Search auxiliary laws for a region envelope.")
    p.add_argument("--region", default=None)
    p.add_argument("--channel", required=True, help="Channel JSON.")
    p.add_argument("--config", default=None, help="Configuration JSON.")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--convexify", action="store_true")
    p.add_argument("--out", default=None, help="CSV output, JSON written alongside.")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("compare", help="Check an inner envelope against an outer one.")
    p.add_argument("--inner", required=True)
    p.add_argument("--outer", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_compare)

    for name, handler in (
        ("simulate-lemma1", cmd_simulate_lemma1),
        ("simulate-osrb", cmd_simulate_osrb),
    ):
        p = sub.add_parser(name, help="Run a seeded Monte Carlo sweep.")
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="CSV output, JSON written alongside.")
        p.set_defaults(handler=handler)

    p = sub.add_parser("builtin", help="List or print built-in systems.")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--list", action="store_true")
    group.add_argument("--emit", default=None, choices=[r.value for r in RegionId])
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_builtin)

    p = sub.add_parser("parse", help="Parse a system file and print its canonical form.")
    p.add_argument("--file", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_parse)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command.

    Arguments:
        argv: Arguments without the program name, default sys.argv[1:].

    Returns:
        The exit code.
    """

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    try:
        Logs.set_context(
            directory=args.log_dir,
            log_level=getattr(logging, args.log_level),
            root_logger_log_file="wiretap",
        )
        return args.handler(args)
    except Exception as e:
        logger.error(traceback.format_exc())
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
