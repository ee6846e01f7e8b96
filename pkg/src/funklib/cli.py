"""Command-line interface.

Exit codes: 0 success, 1 numerical gate failed, 2 I/O or parse error,
3 precondition violated (odd data, range condition, convexity).
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .convex import (
    circumference_direct,
    circumference_funk,
    make_body,
    minkowski_check,
    width,
)
from .errors import PreconditionError, RangeConditionError
from .harmonics import HarmonicSpectrum, analyze, funk_multiplier, synthesize
from .inversion import invert_abel, invert_harmonic, verify_identity
from .io import (
    FormatError,
    csv_text,
    grid_function_from_dict,
    grid_function_to_dict,
    json_text,
    parse_floats,
    parse_function_spec,
    parse_ints,
    parse_vector,
    read_json,
)
from .sphere import GridFunction, SphereGrid
from .transforms import (
    CircleFunction,
    cosine_transform,
    dual_funk,
    funk,
    generalized_funk_grid,
    multiplier_measure,
    spherical_mean_grid,
)

EXIT_OK, EXIT_GATE, EXIT_IO, EXIT_PRECONDITION = 0, 1, 2, 3


@dataclass
class RunConfig:
    n_lat: int = 64
    n_lon: int | None = None
    bandlimit: int | None = None
    circle_nodes: int = 256
    fractional_nodes: int = 512
    identity_tol: float = 1e-3
    odd_rtol: float = 1e-6
    output: str | None = None
    format: str = "json"
    threads: int = 1

    def __post_init__(self):
        if self.n_lon is None:
            self.n_lon = 2 * self.n_lat
        if self.bandlimit is not None and self.bandlimit > self.n_lat - 1:
            raise ValueError(f"bandlimit {self.bandlimit} exceeds n_lat - 1 = {self.n_lat - 1}")

    def grid(self) -> SphereGrid:
        return SphereGrid(self.n_lat, self.n_lon)

    @classmethod
    def from_sources(cls, args: argparse.Namespace) -> "RunConfig":
        values: dict = {}
        if getattr(args, "config", None):
            data = read_json(args.config)
            if not isinstance(data, dict):
                raise FormatError("config file must hold a JSON object")
            names = {f.name for f in dataclasses.fields(cls)}
            unknown = set(data) - names
            if unknown:
                raise FormatError(f"unknown config keys: {sorted(unknown)}")
            values.update(data)
        env = os.environ.get("FUNKLIB_THREADS")
        if env:
            try:
                values["threads"] = max(1, int(env))
            except ValueError as exc:
                raise FormatError(f"FUNKLIB_THREADS must be an integer, got {env!r}") from exc
        for name in ("n_lat", "n_lon", "bandlimit", "circle_nodes", "fractional_nodes",
                     "identity_tol", "odd_rtol", "output", "format"):
            v = getattr(args, name, None)
            if v is not None:
                values[name] = v
        return cls(**values)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_input(spec: str, cfg: RunConfig) -> GridFunction:
    obj = parse_function_spec(spec)
    if isinstance(obj, GridFunction):
        return obj
    grid = cfg.grid()
    if obj.L > grid.n_lat - 1:
        raise FormatError(f"degree {obj.L} exceeds grid bandlimit {grid.n_lat - 1}")
    return synthesize(obj, grid)


def _parse_which(which: str) -> tuple[str, float | None]:
    name, _, arg = which.partition(":")
    if name in ("funk", "dual"):
        if arg:
            raise FormatError(f"{name} takes no parameter")
        return name, None
    if name in ("mean", "gen", "cosine"):
        if not arg:
            raise FormatError(f"{name} needs a parameter, e.g. {name}:0.5")
        try:
            return name, float(arg)
        except ValueError as exc:
            raise FormatError(f"bad parameter in {which!r}") from exc
    raise FormatError(f"unknown transform {which!r}")


def cmd_transform(args, cfg: RunConfig) -> int:
    f = _load_input(args.f, cfg)
    name, p = _parse_which(args.which)
    m = cfg.circle_nodes
    meta = {"transform": name, "input": args.f}
    if name == "funk":
        out, kind = funk(f, L=cfg.bandlimit).fn, "circle"
    elif name == "dual":
        out, kind = dual_funk(CircleFunction(f)), "grid"
    elif name == "mean":
        out, kind = spherical_mean_grid(f, p, m), "grid"
        meta["t"] = p
    elif name == "gen":
        if not 0.0 <= p <= math.pi / 2:
            raise PreconditionError("gen angle must lie in [0, pi/2]")
        out, kind = generalized_funk_grid(f, p, m), "circle"
        meta["theta"] = p
    else:
        out, kind = cosine_transform(f, p, cfg.bandlimit), "grid"
        meta["alpha"] = p
        meta["normalization"] = "none"
    meta["kind"] = kind
    if cfg.format == "csv":
        rows = ((*x, v) for x, v in zip(out.grid.nodes, out.values))
        _emit(csv_text(["x", "y", "z", "value"], rows), cfg.output)
    else:
        _emit(json_text(grid_function_to_dict(out, **meta)), cfg.output)
    return EXIT_OK


def _load_circle_data(path: str) -> CircleFunction:
    path = path[1:] if path.startswith("@") else path
    data = read_json(path)
    if not isinstance(data, dict):
        raise FormatError("inversion input must be a grid-function JSON object")
    return CircleFunction(grid_function_from_dict(data))


def cmd_invert(args, cfg: RunConfig) -> int:
    g = _load_circle_data(args.g)
    if args.method == "harmonic":
        f = invert_harmonic(g, cfg.bandlimit, cfg.odd_rtol)
        _emit(json_text(grid_function_to_dict(f, kind="grid", method="harmonic", input=args.g)), cfg.output)
        return EXIT_OK
    points = [parse_vector(p) for p in (args.point or ["0,0,1"])]

    def run(x):
        return invert_abel(
            g, x, N_t=cfg.fractional_nodes, theta_samples=cfg.circle_nodes, odd_rtol=cfg.odd_rtol
        ).to_dict(profiles=args.profiles)

    if cfg.threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            reports = list(pool.map(run, points))
    else:
        reports = [run(x) for x in points]
    _emit(json_text({"method": "abel", "input": args.g, "reports": reports}), cfg.output)
    return EXIT_OK


def default_thetas(k: int = 16) -> list[float]:
    return [(j + 0.5) * (math.pi / 2) / k for j in range(k)]


def cmd_verify_identity(args, cfg: RunConfig) -> int:
    f = _load_input(args.f, cfg)
    thetas = parse_floats(args.theta) if args.theta else default_thetas()
    x = parse_vector(args.point)
    lhs, rhs = verify_identity(f, x, thetas, N=cfg.fractional_nodes, m=cfg.circle_nodes)
    err = np.abs(lhs - rhs)
    rows = zip(thetas, lhs, rhs, err)
    _emit(csv_text(["theta", "lhs", "rhs", "abs_error"], rows), cfg.output)
    worst = float(err.max())
    if worst > cfg.identity_tol:
        print(f"identity gate failed: max error {worst:.3e} > {cfg.identity_tol:.1e}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def _parse_body(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "ball":
        vals = parse_floats(arg)
        if len(vals) != 1:
            raise FormatError("ball:<R> takes one radius")
        return make_body("ball", *vals)
    if kind == "ellipsoid":
        vals = parse_floats(arg)
        if len(vals) != 3:
            raise FormatError("ellipsoid:<a>,<b>,<c> takes three semi-axes")
        return make_body("ellipsoid", *vals)
    if kind == "harmonic":
        obj = parse_function_spec(arg)
        if not isinstance(obj, HarmonicSpectrum):
            obj = analyze(obj)
        return make_body("harmonic", spectrum=obj)
    raise FormatError(f"unknown body spec {spec!r}")


def cmd_convex(args, cfg: RunConfig) -> int:
    body = _parse_body(args.body)
    m = cfg.circle_nodes
    if args.direction:
        dirs = np.array([parse_vector(d) for d in args.direction])
    else:
        dirs = SphereGrid(args.directions).nodes
    summary: dict = {"body": args.body, "report": args.report}
    if args.report == "width":
        B = np.asarray(width(body, dirs))
        text = csv_text(["x", "y", "z", "width"], ((*d, b) for d, b in zip(dirs, B)))
        summary.update(min=float(B.min()), max=float(B.max()), spread=float((B.max() - B.min()) / B.mean()))
    elif args.report == "circumference":
        Uf = np.asarray(circumference_funk(body, dirs, m))
        Ud = np.array([circumference_direct(body, d, m) for d in dirs])
        rows = ((*d, a, b) for d, a, b in zip(dirs, Uf, Ud))
        text = csv_text(["x", "y", "z", "circumference_funk", "circumference_direct"], rows)
        summary.update(max_formula_gap=float(np.max(np.abs(Uf - Ud))))
    else:
        rep = minkowski_check(body, args.directions, args.const_tol, m)
        if args.direction:
            B = np.asarray(width(body, dirs))
            U = np.asarray(circumference_funk(body, dirs, m))
        else:
            dirs, B, U = rep.widths.directions, rep.widths.values, rep.circumferences.values
        text = csv_text(["x", "y", "z", "width", "circumference"], ((*d, b, u) for d, b, u in zip(dirs, B, U)))
        summary.update(rep.summary(), tol=args.const_tol)
    _emit(text, cfg.output)
    summary_text = json_text(summary)
    if args.summary:
        Path(args.summary).write_text(summary_text)
    elif cfg.output:
        sys.stdout.write(summary_text)
    else:
        sys.stderr.write(summary_text)
    return EXIT_OK


def cmd_multipliers(args, cfg: RunConfig) -> int:
    alphas = parse_floats(args.alpha)
    degs = parse_ints(args.degrees)
    if any(a <= 0 for a in alphas):
        raise PreconditionError("alpha values must be positive")
    if any(l % 2 or l < 0 for l in degs):
        raise PreconditionError("degrees must be even and non-negative")
    grid = SphereGrid(max(16, max(degs, default=0) + 2))
    lam0 = 2.0 * math.pi
    rows = []
    for a in alphas:
        c0 = multiplier_measure("cosine", 0, grid, alpha=a)
        for l in degs:
            ratio = multiplier_measure("cosine", l, grid, alpha=a) / c0
            limit = funk_multiplier(l) / lam0
            rows.append((a, l, ratio, limit, abs(ratio - limit)))
    _emit(csv_text(["alpha", "degree", "ratio", "limit_ratio", "abs_diff"], rows), cfg.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file mirroring RunConfig")
    common.add_argument("--n-lat", dest="n_lat", type=int)
    common.add_argument("--n-lon", dest="n_lon", type=int)
    common.add_argument("--bandlimit", type=int)
    common.add_argument("--circle-nodes", dest="circle_nodes", type=int)
    common.add_argument("--fractional-nodes", dest="fractional_nodes", type=int)
    common.add_argument("--tol", dest="identity_tol", type=float)
    common.add_argument("--odd-rtol", dest="odd_rtol", type=float)
    common.add_argument("--out", dest="output")
    common.add_argument("--format", choices=["json", "csv"])

    p = argparse.ArgumentParser(prog="funklib", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", parents=[common], help="apply a transform to a function")
    t.add_argument("--f", required=True, help="const:<v>, ylm:<l>,<m>, sums with +, or @file.json")
    t.add_argument("--which", default="funk", help="funk | dual | mean:<t> | gen:<theta> | cosine:<alpha>")
    t.set_defaults(func=cmd_transform)

    i = sub.add_parser("invert", parents=[common], help="reconstruct f from great-circle data")
    i.add_argument("--g", required=True, help="grid-function JSON of the transform data")
    i.add_argument("--method", choices=["harmonic", "abel"], default="harmonic")
    i.add_argument("--point", action="append", help="x,y,z for the abel method (repeatable)")
    i.add_argument("--profiles", action="store_true", help="include t-profiles in abel reports")
    i.set_defaults(func=cmd_invert)

    v = sub.add_parser("verify-identity", parents=[common], help="check the shifted-dual identity")
    v.add_argument("--f", required=True)
    v.add_argument("--theta", help="comma-separated angles in (0, pi/2)")
    v.add_argument("--point", default="0,0,1")
    v.set_defaults(func=cmd_verify_identity)

    c = sub.add_parser("convex", parents=[common], help="width / circumference tables for a body")
    c.add_argument("--body", required=True, help="ball:<R> | ellipsoid:<a>,<b>,<c> | harmonic:<spec>")
    c.add_argument("--report", choices=["width", "circumference", "minkowski"], default="minkowski")
    c.add_argument("--directions", type=int, default=16, help="n_lat of the direction grid")
    c.add_argument("--direction", action="append", help="explicit x,y,z direction (repeatable)")
    c.add_argument("--const-tol", dest="const_tol", type=float, default=1e-6, help="constant-ness tolerance")
    c.add_argument("--summary", help="path for the summary JSON")
    c.set_defaults(func=cmd_convex)

    mu = sub.add_parser("multipliers", parents=[common], help="cosine-transform multiplier ratios")
    mu.add_argument("--alpha", default="0.2,0.1,0.05,0.01")
    mu.add_argument("--degrees", default="0,2,4")
    mu.set_defaults(func=cmd_multipliers)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_sources(args)
        return args.func(args, cfg)
    except RangeConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
