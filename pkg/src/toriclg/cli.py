"""Command-line front end: fan files in, exact reports out.

Exit codes: 0 success, 2 parse/usage error, 3 fan-gate failure,
4 identity-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import mirror, seidel
from .fan import (BUILTIN_NAMES, Fan, FanError, FanGateError, ToricVariety, builtin,
                  validate)
from .series import TruncatedSeries, series_to_obj

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GATE = 3
EXIT_CHECK = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# Fan input
# ---------------------------------------------------------------------------

def parse_fan_file(path: str) -> tuple[Fan, Optional[list[list[int]]], dict]:
    """Read the TOML fan format; returns (fan, divisor_matrix or None, options)."""
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE)
    except tomllib.TOMLDecodeError as exc:
        raise CliError(f"TOML syntax error in {path}: {exc}", EXIT_PARSE)
    if "fan" not in data:
        raise CliError(f"{path}: missing [fan] table", EXIT_PARSE)
    table = data["fan"]
    try:
        dim = int(table["dim"])
        rays = tuple(tuple(int(x) for x in ray) for ray in table["rays"])
        cones = tuple(tuple(int(i) - 1 for i in cone) for cone in table["max_cones"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed [fan] table: {exc}", EXIT_PARSE)
    for cone in cones:
        if any(i < 0 for i in cone):
            raise CliError(f"{path}: max_cones indices are 1-based", EXIT_PARSE)
    try:
        fan = Fan(dim, rays, cones)
    except FanError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE)
    matrix = None
    if "basis" in data and "divisor_matrix" in data["basis"]:
        try:
            matrix = [[int(x) for x in row] for row in data["basis"]["divisor_matrix"]]
        except (TypeError, ValueError) as exc:
            raise CliError(f"{path}: malformed divisor_matrix: {exc}", EXIT_PARSE)
    options = data.get("options", {})
    return fan, matrix, options


def _load_variety(source: str) -> tuple[ToricVariety, dict]:
    if source.lower() in BUILTIN_NAMES:
        return builtin(source.lower()), {}
    fan, matrix, options = parse_fan_file(source)
    try:
        return ToricVariety.build(fan, matrix, name=os.path.basename(source)), options
    except FanGateError as exc:
        raise CliError(str(exc), EXIT_GATE)
    except FanError as exc:
        raise CliError(str(exc), EXIT_PARSE)


def _resolve_order(args, tv: ToricVariety, options: dict) -> int:
    if args.order is not None:
        order = args.order
    elif os.environ.get("ORDER"):
        try:
            order = int(os.environ["ORDER"])
        except ValueError:
            raise CliError("ORDER environment variable must be an integer", EXIT_PARSE)
    elif "order" in options:
        order = int(options["order"])
    else:
        order = 8 if tv.n <= 2 else 6
    if order < 1:
        raise CliError("truncation order must be >= 1", EXIT_PARSE)
    return order


# ---------------------------------------------------------------------------
# Rendering helpers
# ---------------------------------------------------------------------------

def _emit(args, payload: dict, text_lines: Sequence[str]):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _series_payload(series: TruncatedSeries) -> list[dict]:
    return series_to_obj(series)


def _vector_lines(label: str, vec, basis: str) -> str:
    inner = " , ".join(f"({s})*{basis}{i + 1}" for i, s in enumerate(vec) if not s.is_zero())
    return f"{label} = {inner if inner else '0'}"


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    if args.fan.lower() in BUILTIN_NAMES:
        tv = builtin(args.fan.lower())
        report = tv.validation_report()
    else:
        fan, _, _ = parse_fan_file(args.fan)
        report = validate(fan)
    payload = {"verb": "validate", "fan": args.fan, "report": report.as_dict()}
    lines = [f"{flag}: {'yes' if value else 'NO'}"
             for flag, value in report.as_dict().items()]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_mirror_map(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    mm = mirror.mirror_map(tv, order)
    payload = {"verb": "mirror-map", "fan": args.fan, "order": order,
               "forward_g": [_series_payload(g) for g in mm.forward],
               "inverse_units": [_series_payload(u) for u in mm.inverse_units],
               "h0_defect": _series_payload(mm.h0_defect)}
    lines = [f"log q_{a + 1} = log y_{a + 1} + g_{a + 1}(y) with g_{a + 1} = {g}"
             for a, g in enumerate(mm.forward)]
    lines += [f"y_{a + 1} = q_{a + 1} * ({u})" for a, u in enumerate(mm.inverse_units)]
    if mm.has_h0_defect:
        lines.append(f"WARNING: scalar z^-1 defect g00 = {mm.h0_defect}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_g0(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    series = [mirror.g0_series(tv, j, order) for j in range(tv.m)]
    payload = {"verb": "g0", "fan": args.fan, "order": order,
               "g0": [_series_payload(s) for s in series]}
    lines = [f"g0^({j + 1}) = {s}" for j, s in enumerate(series)]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_corrections(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    corr = mirror.correction_terms(tv, order)
    payload = {"verb": "corrections", "fan": args.fan, "order": order,
               "f": [_series_payload(s) for s in corr.series]}
    lines = [f"f_{j + 1} = {s}" for j, s in enumerate(corr.series)]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_potential(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    pot = mirror.potential(tv, order)
    payload = {"verb": "potential", "fan": args.fan, "order": order,
               "w_terms": [_series_payload(w) for w in pot.w_terms],
               "total": _series_payload(pot.total)}
    lines = ["W = " + " + ".join(f"({f})*z{j + 1}"
                                 for j, f in enumerate(pot.corrections.series)),
             f"as a disc-ring series: {pot.total}"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_open_gw(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    if args.i is None or args.d is None:
        raise CliError("open-gw requires --i and --d", EXIT_PARSE)
    if not 1 <= args.i <= tv.m:
        raise CliError(f"--i must be in 1..{tv.m}", EXIT_PARSE)
    try:
        d = tuple(int(x) for x in args.d.split(","))
    except ValueError:
        raise CliError("--d must be a comma-separated integer vector", EXIT_PARSE)
    try:
        value = mirror.open_gw(tv, args.i - 1, d, order)
    except mirror.OutOfModelError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    payload = {"verb": "open-gw", "fan": args.fan, "order": order,
               "i": args.i, "d": list(d), "n": str(value)}
    _emit(args, payload, [str(value)])
    return EXIT_OK


def cmd_seidel(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    bat = seidel.batyrev_elements(tv, order)
    sei = seidel.seidel_elements(tv, order)
    payload = {"verb": "seidel", "fan": args.fan, "order": order,
               "batyrev": [[_series_payload(c) for c in el] for el in bat],
               "seidel": [[_series_payload(c) for c in el] for el in sei]}
    lines = [_vector_lines(f"Dtilde_{j + 1}", el, "p") for j, el in enumerate(bat)]
    lines += [_vector_lines(f"Stilde_{j + 1}", el, "p") for j, el in enumerate(sei)]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_lifts(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    closed = seidel.seidel_lifts_closed(tv, order)
    via_jacobi = seidel.seidel_lifts_jacobi(tv, order)
    payload = {"verb": "lifts", "fan": args.fan, "order": order,
               "lifts": [[_series_payload(c) for c in el] for el in closed],
               "routes_agree": closed == via_jacobi}
    lines = [_vector_lines(f"Shat_{j + 1}", el, "D") for j, el in enumerate(closed)]
    if closed != via_jacobi:
        lines.append("ERROR: closed-formula lifts disagree with inverse-Jacobi lifts")
        _emit(args, payload, lines)
        return EXIT_CHECK
    lines.append("routes agree: closed formula == inverse Jacobi")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    tv, options = _load_variety(args.fan)
    order = _resolve_order(args, tv, options)
    report = seidel.run_verification(tv, order)
    payload = report.as_dict()
    payload.update({"verb": "verify", "fan": args.fan})
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}"
             + (f"  ({len(c.failures)} failing coefficients)" if not c.passed else "")
             for c in report.checks]
    lines.append(f"result: {'all checks passed' if report.passed else 'FAILURES found'} "
                 f"at order {order}")
    _emit(args, payload, lines)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_examples(args) -> int:
    descriptions = {
        "p1": "projective line",
        "p2": "projective plane",
        "f0": "P1 x P1",
        "f1": "first Hirzebruch surface (Fano)",
        "f2": "second Hirzebruch surface (semi-positive, not Fano)",
        "p1xp2": "P1 x P2 threefold",
        "p1xf2": "P1 x F2 threefold (semi-positive, not Fano)",
    }
    payload = {"verb": "examples", "builtins": descriptions}
    lines = [f"{name:8s} {descriptions[name]}" for name in BUILTIN_NAMES]
    _emit(args, payload, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

VERBS = {
    "validate": cmd_validate,
    "mirror-map": cmd_mirror_map,
    "g0": cmd_g0,
    "corrections": cmd_corrections,
    "potential": cmd_potential,
    "open-gw": cmd_open_gw,
    "seidel": cmd_seidel,
    "lifts": cmd_lifts,
    "verify": cmd_verify,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toriclg",
        description="Exact Landau-Ginzburg potentials, mirror maps and Seidel "
                    "element lifts for smooth projective toric fans.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb)
        if verb != "examples":
            p.add_argument("--fan", required=True,
                           help="builtin name or path to a TOML fan file")
            p.add_argument("--order", type=int, default=None,
                           help="truncation order (default 8, 6 for 3-folds; "
                                "ORDER env var overrides the default)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if verb == "open-gw":
            p.add_argument("--i", type=int, help="ray index, 1-based")
            p.add_argument("--d", help="curve class, comma-separated nef coordinates")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return VERBS[args.verb](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FanGateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GATE
    except FanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
