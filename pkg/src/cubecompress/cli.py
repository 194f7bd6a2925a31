"""Command line interface.

Subcommands: generate, validate, verify, profile, analyze.  Exit codes:
0 success, 1 a verification or validation failed, 2 bad input or
configuration.  With a fixed seed every command is deterministic, byte
for byte, including the analyze figures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Optional, Sequence, Tuple

from . import analysis, generators, io as gio
from .embedding import DEFAULT_EPS_GRID, Epsilon
from .errors import (
    CubeComplexError,
    DisconnectedGraph,
    DuplicateEdge,
    HalfspaceViolation,
    InsufficientData,
    LoopEdge,
    MedianViolation,
    NoSuchCube,
    NonCrossingPair,
    ParseError,
    RadiusExceedsDiameter,
    SchemaError,
    SpecTooLarge,
)
from .median import bfs_distances, compute_hyperplanes, dimension, validate_median

__all__ = ["RunConfig", "build_parser", "run", "main"]

# errors meaning the math failed on the given instance
_VERIFY_FAILURES = (MedianViolation, HalfspaceViolation, NonCrossingPair,
                    NoSuchCube)
# errors meaning the request itself was bad
_INPUT_ERRORS = (ParseError, SchemaError, LoopEdge, DuplicateEdge,
                 DisconnectedGraph, SpecTooLarge, RadiusExceedsDiameter,
                 InsufficientData, ValueError, OSError)


@dataclasses.dataclass
class RunConfig:
    """Everything one invocation needs; produced by build_parser."""

    command: str
    spec: Optional[str] = None
    input: Optional[str] = None
    out: Optional[str] = None
    basepoint: int = 0
    eps_values: Tuple[float, ...] = tuple(e.value for e in DEFAULT_EPS_GRID)
    single_eps: Optional[float] = None
    seed: int = 0
    radii: Optional[Tuple[int, ...]] = None
    window: Optional[Tuple[int, int]] = None
    max_vertices: int = generators.DEFAULT_MAX_VERTICES
    exhaustive_limit: int = 500
    sample_count: int = 10_000
    all_basepoints: bool = False
    json_errors: bool = False


def _parse_eps_list(text: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise SchemaError(f"bad eps list {text!r}") from exc
    if not values:
        raise SchemaError("eps list is empty")
    for v in values:
        Epsilon(v)
    return values


def _parse_int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise SchemaError(f"bad integer list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-errors", action="store_true",
                        help="report errors as JSON on stderr")
    parser = argparse.ArgumentParser(
        prog="cubecompress", parents=[common],
        description="Median graphs, their hyperplanes, and Hilbert-space"
                    " compression experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common],
                       help="build a standard instance")
    p.add_argument("--spec", required=True,
                   help="inline JSON generator spec, or a path to one")
    p.add_argument("--out", required=True, help="output graph JSON file")
    p.add_argument("--max-vertices", type=int,
                   default=generators.DEFAULT_MAX_VERTICES)
    p.add_argument("--seed", type=int, default=0,
                   help="seed for sampled validation of large instances")

    p = sub.add_parser("validate", parents=[common],
 help="check the unique-median property")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--exhaustive-limit", type=int, default=500)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", parents=[common],
 help="run the metric bound verifications")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--eps", default=None,
                   help="comma separated eps values in (0, 1/2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="also write the report here")
    p.add_argument("--all-basepoints", action="store_true",
                   help="sweep every vertex as basepoint (small instances)")

    p = sub.add_parser("profile", parents=[common],
 help="compression profile as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps", default=None,
                   help="one eps value; omit for the unweighted embedding")
    p.add_argument("--out", required=True)
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--radii", default=None, help="comma separated radii")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", parents=[common],
                       help="full run: validation, verifications, profiles,"
                            " fits, figures")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps-grid", default=None,
                   help="comma separated eps values in (0, 1/2)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--basepoint", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", default=None,
                   help="fit window as lo,hi (default: 16 to the top decile)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command,
                    json_errors=getattr(args, "json_errors", False))
    for name in ("spec", "input", "out", "basepoint", "seed",
                 "max_vertices", "all_basepoints"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "exhaustive_limit"):
        cfg.exhaustive_limit = args.exhaustive_limit
    if hasattr(args, "samples"):
        cfg.sample_count = args.samples
    if getattr(args, "radii", None):
        cfg.radii = _parse_int_list(args.radii)
    if getattr(args, "window", None):
        w = _parse_int_list(args.window)
        if len(w) != 2:
            raise SchemaError("window must be lo,hi")
        cfg.window = (w[0], w[1])
    if args.command == "profile":
        cfg.single_eps = float(args.eps) if args.eps else None
        if cfg.single_eps is not None:
            Epsilon(cfg.single_eps)
    elif args.command == "verify" and getattr(args, "eps", None):
        cfg.eps_values = _parse_eps_list(args.eps)
    elif args.command == "analyze" and getattr(args, "eps_grid", None):
        cfg.eps_values = _parse_eps_list(args.eps_grid)
    return cfg


def _load_spec(text: str) -> generators.GeneratorSpec:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"inline spec: {exc.msg} at line {exc.lineno}",
                             line=exc.lineno) from exc
    else:
        try:
            with open(text, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{text}: {exc.msg} at line {exc.lineno}",
                             line=exc.lineno) from exc
    return generators.spec_from_dict(data)


def _cmd_generate(cfg: RunConfig) -> int:
    spec = _load_spec(cfg.spec)
    g = generators.generate(spec, max_vertices=cfg.max_vertices,
                            validation_seed=cfg.seed)
    gio.save_graph(g, cfg.out)
    print(f"wrote {cfg.out} ({g.vertex_count} vertices,"
          f" {len(g.edges)} edges)")
    return 0


def _cmd_validate(cfg: RunConfig) -> int:
    g = gio.load_graph(cfg.input)
    report = validate_median(g, exhaustive_limit=cfg.exhaustive_limit,
                             sample_count=cfg.sample_count, seed=cfg.seed)
    print(json.dumps(gio.to_jsonable(report), sort_keys=True, indent=2))
    return 0 if report.passed else 1


def _verification_suite(g, hs, basepoint: int, eps_values, seed: int,
                        weights=None, distances=None):
    W = weights if weights is not None else analysis.weight_matrix(
        g, hs, basepoint)
    dcache = distances if distances is not None else analysis.DistanceCache(g)
    reports = {
        "fellow_traveler": analysis.verify_fellow_traveler(
            g, hs, basepoint, weights=W),
        "crossing_once": analysis.verify_crossing_once(
            g, hs, seed=seed, distances=dcache),
        "packing": analysis.verify_packing_inequalities(
            eps_values=eps_values),
        "lipschitz": {},
        "lower_bound": {},
    }
    for e in eps_values:
        key = f"{e:g}"
        reports["lipschitz"][key] = analysis.verify_lipschitz(
            g, hs, basepoint, e, weights=W)
        reports["lower_bound"][key] = analysis.verify_lower_bound(
            g, hs, basepoint, e, seed=seed, distances=dcache, weights=W)
    return reports


def _suite_passed(reports) -> bool:
    flat = [reports["fellow_traveler"], reports["crossing_once"],
            reports["packing"]]
    flat.extend(reports["lipschitz"].values())
    flat.extend(reports["lower_bound"].values())
    return all(r.passed for r in flat)


def _cmd_verify(cfg: RunConfig) -> int:
    g = gio.load_graph(cfg.input)
    validation = validate_median(g, seed=cfg.seed)
    if not validation.passed:
        print(json.dumps({"validation": gio.to_jsonable(validation)},
                         sort_keys=True, indent=2))
        return 1
    hs = compute_hyperplanes(g)
    basepoints = (range(g.vertex_count) if cfg.all_basepoints
                  else [cfg.basepoint])
    out = {"input": cfg.input, "vertices": g.vertex_count,
           "edges": len(g.edges), "hyperplanes": hs.count,
           "dimension": dimension(g, hs),
           "eps_grid": list(cfg.eps_values),
           "validation": gio.to_jsonable(validation), "basepoints": {}}
    ok = True
    for b in basepoints:
        if not (0 <= b < g.vertex_count):
            raise SchemaError(f"basepoint {b} out of range")
        reports = _verification_suite(g, hs, b, cfg.eps_values, cfg.seed)
        ok = ok and _suite_passed(reports)
        out["basepoints"][str(b)] = gio.to_jsonable(reports)
    out["passed"] = ok
    text = json.dumps(out, sort_keys=True, indent=2)
    print(text)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if ok else 1


def _cmd_profile(cfg: RunConfig) -> int:
    g = gio.load_graph(cfg.input)
    validation = validate_median(g, seed=cfg.seed)
    if not validation.passed:
        print(json.dumps({"validation": gio.to_jsonable(validation)},
                         sort_keys=True, indent=2))
        return 1
    hs = compute_hyperplanes(g)
    if not (0 <= cfg.basepoint < g.vertex_count):
        raise SchemaError(f"basepoint {cfg.basepoint} out of range")
    radii = cfg.radii
    if radii is None:
        ecc = int(bfs_distances(g, cfg.basepoint).max())
        radii = analysis.default_radii(ecc)
    profile = analysis.compression_profile(
        g, hs, cfg.basepoint, cfg.single_eps, radii, seed=cfg.seed)
    gio.save_profile(profile, cfg.out)
    print(f"wrote {cfg.out} ({len(profile.radii)} radii)")
    return 0


def _cmd_analyze(cfg: RunConfig) -> int:
    from . import plots  # imported lazily: pulls in matplotlib

    g = gio.load_graph(cfg.input)
    if not (0 <= cfg.basepoint < g.vertex_count):
        raise SchemaError(f"basepoint {cfg.basepoint} out of range")
    os.makedirs(cfg.out, exist_ok=True)
    fig_dir = os.path.join(cfg.out, "figures")
    os.makedirs(fig_dir, exist_ok=True)

    summary = {"input": cfg.input, "basepoint": cfg.basepoint,
               "seed": cfg.seed, "eps_grid": list(cfg.eps_values),
               "vertices": g.vertex_count, "edges": len(g.edges)}
    validation = validate_median(g, seed=cfg.seed)
    summary["validation"] = gio.to_jsonable(validation)
    if not validation.passed:
        summary["passed"] = False
        gio.save_report(summary, os.path.join(cfg.out, "summary.json"))
        print(f"validation failed at triple {validation.failure_witness};"
              f" wrote {cfg.out}/summary.json")
        return 1

    hs = compute_hyperplanes(g)
    summary["hyperplanes"] = hs.count
    summary["dimension"] = dimension(g, hs)

    W = analysis.weight_matrix(g, hs, cfg.basepoint)
    dcache = analysis.DistanceCache(g)
    reports = _verification_suite(g, hs, cfg.basepoint, cfg.eps_values,
                                  cfg.seed, weights=W, distances=dcache)
    ok = _suite_passed(reports)
    gio.save_report(reports, os.path.join(cfg.out, "reports.json"))
    print(f"wrote {cfg.out}/reports.json")

    ecc = int(bfs_distances(g, cfg.basepoint).max())
    radii = cfg.radii if cfg.radii is not None else analysis.default_radii(ecc)
    window = cfg.window
    if window is None:
        window = (16, max(16, int(ecc * 0.9)))

    profiles = {}
    fits = {}
    grid = [None] + [float(e) for e in cfg.eps_values]
    for eps_value in grid:
        profile = analysis.compression_profile(
            g, hs, cfg.basepoint, eps_value, radii, seed=cfg.seed,
            distances=dcache, weights=W)
        profiles[eps_value] = profile
        try:
            fits[eps_value] = analysis.fit_exponent(profile, window)
        except InsufficientData:
            fits[eps_value] = None
        name = ("profile_unweighted.csv" if eps_value is None
                else f"profile_eps_{eps_value:g}.csv")
        gio.save_profile(profile, os.path.join(cfg.out, name))
        print(f"wrote {cfg.out}/{name}")

    summary["radii"] = list(radii)
    summary["window"] = list(window)
    summary["fits"] = {("unweighted" if e is None else f"{e:g}"):
                       gio.to_jsonable(f) for e, f in fits.items()}
    summary["reports_passed"] = ok
    summary["passed"] = ok
    gio.save_report(summary, os.path.join(cfg.out, "summary.json"))
    print(f"wrote {cfg.out}/summary.json")

    plots.save_profile_figure(profiles, fits,
                              os.path.join(fig_dir, "profiles.png"))
    plots.save_exponent_figure(fits, os.path.join(fig_dir, "exponents.png"))
    print(f"wrote {fig_dir}/profiles.png")
    print(f"wrote {fig_dir}/exponents.png")
    print("passed" if ok else "failed")
    return 0 if ok else 1


def run(config: RunConfig) -> int:
    """Execute one configured command, returning the exit status."""
    handler = {"generate": _cmd_generate, "validate": _cmd_validate,
               "verify": _cmd_verify, "profile": _cmd_profile,
               "analyze": _cmd_analyze}[config.command]
    try:
        return handler(config)
    except _VERIFY_FAILURES as exc:
        _report_error(exc, config.json_errors)
        return 1
    except _INPUT_ERRORS as exc:
        _report_error(exc, config.json_errors)
        return 2
    except CubeComplexError as exc:
        _report_error(exc, config.json_errors)
        return 2


def _report_error(exc: Exception, as_json: bool) -> None:
    if as_json:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        line = getattr(exc, "line", None)
        if line is not None:
            payload["line"] = line
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except (SchemaError, ValueError) as exc:
        _report_error(exc, getattr(args, "json_errors", False))
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
