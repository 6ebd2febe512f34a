"""Command-line front end: check, eval, trace, and paths over config files.

Every invocation prints exactly one JSON document to stdout, byte-identical
across runs on identical inputs (sorted keys, no floats, no timestamps).
Exit codes: 0 ok/compatible, 1 incompatible or path disagreement, 2 verdict
rests on sampling only, 3 usage error, 4 config parse error, 5 evaluation
error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys

from .autonomous import (
    COMPATIBLE,
    SAMPLED_COMPATIBLE,
    check_compatibility,
    describe_route,
    eval_box,
    eval_forward,
    path_independence_check,
)
from .closedforms import eval_matrix_system, eval_monoid
from .config import (
    SystemConfig,
    parse_config,
    parse_index,
    parse_state,
    render_state,
)
from .errors import (
    ConfigError,
    IncompatibleSystemError,
    LatticeRecError,
)
from .extension import eval_anywhere
from .lattice import leq
from .nonautonomous import AugmentedState, check_compatibility_timed, eval_timed
from .statespace import FiniteEnumerated, IntegerLine, ModularLine

EXIT_OK = 0
EXIT_INCOMPATIBLE = 1
EXIT_SAMPLED = 2
EXIT_USAGE = 3
EXIT_PARSE = 4
EXIT_EVAL = 5


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="latticerec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, t0=False, x0=False, t=False, corner=False):
        p.add_argument("--config", required=True, help="system definition file (JSON)")
        if t0:
            p.add_argument("--t0", required=t0 == "required", help="start index a,b,...")
        if x0:
            p.add_argument("--x0", required=True, help="start state")
        if t:
            p.add_argument("--t", required=t == "required", help="target index a,b,...")
        if corner:
            p.add_argument("--corner", required=True, help="far box corner a,b,...")

    p = sub.add_parser("check", help="commutation check with witnesses")
    common(p, t0="optional", t="optional")

    p = sub.add_parser("eval", help="solution value at one lattice point")
    common(p, t0="required", x0=True, t="required")
    p.add_argument("--allow-negative", action="store_true",
                   help="evaluate outside the forward cone (bijective systems)")
    p.add_argument("--unsafe-incompatible", action="store_true",
                   help="evaluate the formula even if the maps do not commute")

    p = sub.add_parser("trace", help="fill a box of solution values")
    common(p, t0="required", x0=True, corner=True)
    p.add_argument("--csv", help="also write the grid as CSV to this file")
    p.add_argument("--volume-cap", type=int, help="override the box volume cap")

    p = sub.add_parser("paths", help="walk every monotone path and compare endpoints")
    common(p, t0="required", x0=True, t="required")
    p.add_argument("--path-cap", type=int, help="override the path count cap")
    return parser


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _error_doc(command, digest, family: str, message: str) -> dict:
    return {
        "command": command,
        "config_digest": digest,
        "status": "error",
        "error": {"family": family, "message": message},
    }


def _render_witness(witness) -> dict:
    alpha, beta, state = witness
    if isinstance(state, AugmentedState):
        rendered = {
            "time": list(state.time_part.coords),
            "state": render_state(state.state_part),
        }
    else:
        rendered = render_state(state)
    return {"alpha": alpha, "beta": beta, "state": rendered}


def _render_report(report) -> dict:
    return {
        "status": report.status,
        "decided": report.decided,
        "checked_pairs": report.checked_pairs,
        "witnesses": [_render_witness(w) for w in report.witnesses],
    }


def _scalar_space(space) -> bool:
    return isinstance(space, (FiniteEnumerated, IntegerLine, ModularLine))


def _csv_rows(cfg: SystemConfig, cells):
    m = cfg.dimension
    if _scalar_space(cfg.space):
        header = [f"t_{a}" for a in range(1, m + 1)] + ["state"]
    else:
        width = cfg.space.dim
        header = [f"t_{a}" for a in range(1, m + 1)] + [f"x_{i}" for i in range(1, width + 1)]
    yield header
    for idx, state in cells:
        rendered = render_state(state)
        tail = rendered if isinstance(rendered, list) else [rendered]
        yield [str(c) for c in idx.coords] + [str(v) for v in tail]


def _compat_exit(status: str) -> int:
    if status == COMPATIBLE:
        return EXIT_OK
    if status == SAMPLED_COMPATIBLE:
        return EXIT_SAMPLED
    return EXIT_INCOMPATIBLE


def _index_arg(text: str, dimension: int):
    try:
        return parse_index(text, dimension)
    except LatticeRecError as exc:
        raise _UsageError(str(exc)) from None


def _state_arg(space, text: str):
    try:
        return parse_state(space, text)
    except LatticeRecError as exc:
        raise _UsageError(str(exc)) from None


def _run_check(cfg: SystemConfig, args, digest: str) -> int:
    doc = {"command": "check", "config_digest": digest}
    if cfg.kind == "nonautonomous":
        if args.t0 is None or args.t is None:
            raise _UsageError("timed checks need --t0 and --t as the check window")
        lo = _index_arg(args.t0, cfg.dimension)
        hi = _index_arg(args.t, cfg.dimension)
        report = check_compatibility_timed(cfg.nonautonomous, (lo, hi))
        payload = _render_report(report)
        payload["window"] = {"lo": list(lo.coords), "hi": list(hi.coords)}
    else:
        report = check_compatibility(cfg.autonomous)
        payload = _render_report(report)
        if cfg.monoid_system is not None:
            payload["assumptions"] = list(cfg.monoid_system.assumptions)
    doc["status"] = report.status
    doc["payload"] = payload
    _emit(doc)
    return _compat_exit(report.status)


def _run_eval(cfg: SystemConfig, args, digest: str) -> int:
    t0 = _index_arg(args.t0, cfg.dimension)
    t = _index_arg(args.t, cfg.dimension)
    space = cfg.space
    x0 = _state_arg(space, args.x0)
    unsafe = args.unsafe_incompatible
    doc = {"command": "eval", "config_digest": digest}

    if cfg.kind == "nonautonomous":
        if args.allow_negative:
            raise LatticeRecError(
                "backward evaluation of timed systems is not supported"
            )
        report = check_compatibility_timed(cfg.nonautonomous, (t0, t)) if leq(t0, t) else None
        state = eval_timed(cfg.nonautonomous, t0, x0, t, report=report, unsafe=unsafe)
        route = {"method": "canonical_path_walk"}
    else:
        report = check_compatibility(cfg.autonomous)
        if report.status == "incompatible" and not unsafe:
            raise IncompatibleSystemError(
                f"maps do not commute (witnesses: {report.witnesses}); "
                "rerun with --unsafe-incompatible to evaluate anyway"
            )
        forward = leq(t0, t)
        if not forward and not args.allow_negative:
            raise LatticeRecError(
                f"target {t} is outside the forward cone of {t0}; "
                "rerun with --allow-negative"
            )
        if cfg.kind == "monoid":
            state = eval_monoid(cfg.monoid_system, t0, x0, t)
            route = {"method": "monoid_power"}
        elif cfg.kind == "matrix":
            state = eval_matrix_system(
                cfg.matrices, t0, tuple(x0), t, limits=cfg.limits
            )
            route = {"method": "matrix_power_product"}
        elif args.allow_negative:
            state = eval_anywhere(
                cfg.autonomous, t0, x0, t, report=report, unsafe=unsafe, limits=cfg.limits
            )
            route = {"method": "composed_powers_signed"}
        else:
            state = eval_forward(
                cfg.autonomous, t0, x0, t, report=report, unsafe=unsafe, limits=cfg.limits
            )
            route = {
                "method": "composed_powers",
                "axes": describe_route(cfg.autonomous, t0, t),
            }

    doc["status"] = "ok"
    doc["compatibility"] = _render_report(report) if report is not None else None
    payload = {"state": render_state(state), "route": route}
    if unsafe:
        payload["unsafe_override"] = True
    doc["payload"] = payload
    _emit(doc)
    if unsafe or report is None:
        return EXIT_OK
    return EXIT_SAMPLED if report.status == SAMPLED_COMPATIBLE else EXIT_OK


def _run_trace(cfg: SystemConfig, args, digest: str) -> int:
    if cfg.kind == "nonautonomous":
        raise _UsageError("trace needs an autonomous, monoid, or matrix system")
    t0 = _index_arg(args.t0, cfg.dimension)
    corner = _index_arg(args.corner, cfg.dimension)
    x0 = _state_arg(cfg.space, args.x0)
    limits = cfg.limits
    if args.volume_cap is not None:
        limits = dataclasses.replace(limits, volume_cap=args.volume_cap)
    report = check_compatibility(cfg.autonomous)
    grid = eval_box(cfg.autonomous, t0, x0, corner, report=report, limits=limits)
    rows = [
        {"t": list(idx.coords), "state": render_state(state)} for idx, state in grid.cells
    ]
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            csv.writer(handle, lineterminator="\n").writerows(_csv_rows(cfg, grid.cells))
    doc = {
        "command": "trace",
        "config_digest": digest,
        "status": "ok",
        "compatibility": _render_report(report),
        "payload": {"t0": list(t0.coords), "corner": list(corner.coords), "grid": rows},
    }
    _emit(doc)
    return EXIT_SAMPLED if report.status == SAMPLED_COMPATIBLE else EXIT_OK


def _run_paths(cfg: SystemConfig, args, digest: str) -> int:
    if cfg.kind == "nonautonomous":
        raise _UsageError("paths needs an autonomous, monoid, or matrix system")
    t0 = _index_arg(args.t0, cfg.dimension)
    t = _index_arg(args.t, cfg.dimension)
    x0 = _state_arg(cfg.space, args.x0)
    cap = args.path_cap if args.path_cap is not None else cfg.limits.path_cap
    report = check_compatibility(cfg.autonomous)
    result = path_independence_check(cfg.autonomous, t0, x0, t, cap)
    doc = {
        "command": "paths",
        "config_digest": digest,
        "status": "agree" if result.independent else "disagree",
        "compatibility": _render_report(report),
        "payload": {
            "path_count": result.path_count,
            "agree": result.independent,
            "closed_form": render_state(result.closed_form),
            "endpoints": [
                {"value": render_state(value), "path": list(steps)}
                for value, steps in result.endpoints
            ],
        },
    }
    _emit(doc)
    return EXIT_OK if result.independent else EXIT_INCOMPATIBLE


_VALUE_FLAGS = frozenset(
    {"--config", "--t0", "--x0", "--t", "--corner", "--csv", "--path-cap", "--volume-cap"}
)


def _join_flag_values(argv: list[str]) -> list[str]:
    """Rewrite ["--t", "-1,-2"] as ["--t=-1,-2"] so negative indices parse."""
    joined = []
    i = 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            joined.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            joined.append(argv[i])
            i += 1
    return joined


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_flag_values(list(argv)))
    except _UsageError as exc:
        _emit(_error_doc(None, None, "usage", str(exc)))
        return EXIT_USAGE

    digest = None
    try:
        with open(args.config, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        _emit(_error_doc(args.command, None, "usage", str(exc)))
        return EXIT_USAGE
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()

    try:
        cfg = parse_config(raw.decode("utf-8"))
    except (ConfigError, UnicodeDecodeError) as exc:
        _emit(_error_doc(args.command, digest, "parse", str(exc)))
        return EXIT_PARSE

    runner = {
        "check": _run_check,
        "eval": _run_eval,
        "trace": _run_trace,
        "paths": _run_paths,
    }[args.command]
    try:
        return runner(cfg, args, digest)
    except _UsageError as exc:
        _emit(_error_doc(args.command, digest, "usage", str(exc)))
        return EXIT_USAGE
    except IncompatibleSystemError as exc:
        _emit(_error_doc(args.command, digest, "incompatible", str(exc)))
        return EXIT_INCOMPATIBLE
    except LatticeRecError as exc:
        _emit(_error_doc(args.command, digest, "evaluation", str(exc)))
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
