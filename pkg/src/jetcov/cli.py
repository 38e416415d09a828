"""Command-line front end: experiment orchestration with JSON/CSV output.

Commands: limit-cov, exact-cov, mc-cov, converge, pb, density, sample.
All output is machine-readable and byte-identical across runs for the same
flags, seed, and chunk size.  Complex numbers serialize as ``[re, im]``
pairs; CSV uses '.' decimals and 17 significant digits.

Exit codes: 0 success, 2 usage error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .ensembles import bargmann_fock_family, fubini_study_family
from .jets import (COEFFICIENT_LAWS, JetLayout, PointConfiguration,
                   converge_sweep, empirical_covariance, exact_covariance,
                   jpd_measure, limit_covariance)
from .rng import DEFAULT_CHUNK
from .spheres import poincare_borel_sweep, projection_density


class UsageError(Exception):
    """Flag combination that argparse alone cannot reject."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def parse_points(text: str, m: int) -> PointConfiguration:
    """Parse ``--points``: comma-separated points, ':'-separated coordinates.

    Each coordinate is a Python complex literal, e.g. ``0.5``, ``1+2j``.
    """
    rows = []
    for chunk in text.split(","):
        coords = [c.strip() for c in chunk.split(":")]
        if len(coords) != m:
            raise UsageError(
                f"point {chunk!r} has {len(coords)} coordinates, expected {m}")
        try:
            rows.append([complex(c) for c in coords])
        except ValueError as exc:
            raise UsageError(f"malformed coordinate in point {chunk!r}: {exc}") from exc
    try:
        return PointConfiguration(m, np.array(rows, dtype=complex))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    items = [s for s in (t.strip() for t in text.split(",")) if s]
    if not items:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list")
    try:
        return [int(s) for s in items]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be positive")
    return np.linspace(start, stop, count)


def _complex_pairs(matrix: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(matrix, complex)]


def _layout_block(layout: JetLayout) -> dict:
    return {
        "m": layout.m,
        "n": layout.n,
        "k": layout.k,
        "slots": layout.labels(),
        "note": "value slots first; derivative directions above m are anti-holomorphic",
    }


def _emit(args, text: str) -> None:
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(payload, indent=2) + "\n")


def _emit_csv(args, header: list[str], rows: list[list], comments: list[str] = ()) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    lines.extend(f"# {c}" for c in comments)
    _emit(args, "\n".join(lines) + "\n")


def _matrix_output(args, command: str, config: dict, layout: JetLayout,
                   matrix: np.ndarray, extra: dict | None = None) -> None:
    if args.format == "json":
        payload = {"command": command, "config": config,
                   "layout": _layout_block(layout),
                   "data": {"matrix": _complex_pairs(matrix)}}
        if extra:
            payload["data"].update(extra)
        _emit_json(args, payload)
    else:
        rows = [[i, j, float(v.real), float(v.imag)]
                for i, row in enumerate(matrix) for j, v in enumerate(row)]
        _emit_csv(args, ["row", "col", "re", "im"], rows)


def _family(name: str, m: int):
    if name == "bf":
        return bargmann_fock_family(m)
    if name == "gram-fs":
        if m != 1:
            raise UsageError("--model gram-fs supports only --m 1")
        return fubini_study_family()
    raise UsageError(f"unknown model {name!r}")


def cmd_limit_cov(args) -> None:
    config = parse_points(args.points, args.m)
    factor = args.factor if args.factor is not None else float(math.factorial(args.m))
    matrix = limit_covariance(config, factor)
    _matrix_output(args, "limit-cov",
                   {"m": args.m, "points": _complex_pairs(config.points),
                    "factor": factor},
                   JetLayout(config.m, config.n), matrix)


def cmd_exact_cov(args) -> None:
    config = parse_points(args.points, args.m)
    family = _family(args.model, args.m)
    ensemble = family.build(args.N)
    evaluated = config.scaled_by(1.0 / np.sqrt(args.N)) if args.scaled else config
    matrix = exact_covariance(ensemble, evaluated).full()
    _matrix_output(args, "exact-cov",
                   {"m": args.m, "model": args.model, "N": args.N,
                    "scaled": bool(args.scaled),
                    "points": _complex_pairs(config.points)},
                   JetLayout(config.m, config.n), matrix,
                   extra={"basis_size": ensemble.dim})


def cmd_mc_cov(args) -> None:
    config = parse_points(args.points, args.m)
    family = _family(args.model, args.m)
    ensemble = family.build(args.N)
    evaluated = config.scaled_by(1.0 / np.sqrt(args.N)) if args.scaled else config
    matrix = empirical_covariance(ensemble, evaluated, args.law,
                                  seed=args.seed, samples=args.samples,
                                  chunk_size=args.chunk_size)
    _matrix_output(args, "mc-cov",
                   {"m": args.m, "model": args.model, "N": args.N,
                    "law": args.law, "samples": args.samples,
                    "seed": args.seed, "chunk_size": args.chunk_size,
                    "scaled": bool(args.scaled),
                    "points": _complex_pairs(config.points)},
                   JetLayout(config.m, config.n), matrix,
                   extra={"basis_size": ensemble.dim})


def cmd_converge(args) -> None:
    config = parse_points(args.points, args.m)
    family = _family(args.model, args.m)
    report = converge_sweep(family, config, args.Ns, comparison=args.comparison,
                            seed=args.seed, samples=args.samples,
                            chunk_size=args.chunk_size)
    # Wall times vary run to run; zeros keep the default output byte-identical.
    seconds = [p.seconds if args.timings else 0.0 for p in report.points]
    if args.format == "csv":
        rows = [[p.N, p.frobenius, p.spectral, float(sec)]
                for p, sec in zip(report.points, seconds)]
        _emit_csv(args, ["N", "frobenius", "spectral", "seconds"], rows,
                  comments=[f"slope={_fmt(report.slope)}"])
    else:
        _emit_json(args, {
            "command": "converge",
            "config": {"m": args.m, "model": args.model, "Ns": args.Ns,
                       "comparison": args.comparison, "samples": args.samples,
                       "seed": args.seed, "chunk_size": args.chunk_size,
                       "points": _complex_pairs(config.points)},
            "data": {"rows": [
                {"N": p.N, "frobenius": p.frobenius, "spectral": p.spectral,
                 "seconds": float(sec)}
                for p, sec in zip(report.points, seconds)],
                "slope": report.slope},
        })


def cmd_pb(args) -> None:
    ds = sorted(set(args.d))
    reports = poincare_borel_sweep(ds, args.k, seed=args.seed, samples=args.samples)
    if args.format == "csv":
        rows = [[r.d, j + 1, float(r.ks_distances[j])]
                for r in reports for j in range(args.k)]
        _emit_csv(args, ["d", "coordinate", "ks_distance"], rows)
    else:
        _emit_json(args, {
            "command": "pb",
            "config": {"d": ds, "k": args.k, "samples": args.samples,
                       "seed": args.seed},
            "data": [{"d": r.d,
                      "ks_distances": [float(v) for v in r.ks_distances],
                      "covariance": [[float(v) for v in row] for row in r.covariance]}
                     for r in reports],
        })


def cmd_density(args) -> None:
    grid = args.grid
    points = np.zeros((grid.size, args.k))
    points[:, 0] = grid  # evaluate along the first coordinate axis
    values = projection_density(args.d, args.k, points)
    if args.format == "csv":
        _emit_csv(args, ["x", "density"],
                  [[float(x), float(v)] for x, v in zip(grid, values)])
    else:
        _emit_json(args, {
            "command": "density",
            "config": {"d": args.d, "k": args.k,
                       "grid": [float(x) for x in grid]},
            "data": {"values": [float(v) for v in values]},
        })


def cmd_sample(args) -> None:
    config = parse_points(args.points, args.m)
    layout = JetLayout(config.m, config.n)
    if args.limit:
        factor = args.factor if args.factor is not None else float(math.factorial(args.m))
        delta = limit_covariance(config, factor)
        source = {"kind": "limit", "factor": factor}
    else:
        if args.N is None:
            raise UsageError("provide either --limit or --N")
        family = _family(args.model, args.m)
        ensemble = family.build(args.N)
        delta = exact_covariance(
            ensemble, config.scaled_by(1.0 / np.sqrt(args.N)) if args.scaled else config
        ).full()
        source = {"kind": "exact", "model": args.model, "N": args.N,
                  "scaled": bool(args.scaled)}
    measure = jpd_measure(delta)
    draws = measure.sample_chunked(args.seed, args.count, chunk_size=args.chunk_size)
    if args.format == "json":
        _emit_json(args, {
            "command": "sample",
            "config": {"m": args.m, "points": _complex_pairs(config.points),
                       "count": args.count, "seed": args.seed,
                       "chunk_size": args.chunk_size, "source": source},
            "layout": _layout_block(layout),
            "data": {"samples": _complex_pairs(draws)},
        })
    else:
        rows = [[s, j, float(v.real), float(v.imag)]
                for s, row in enumerate(draws) for j, v in enumerate(row)]
        _emit_csv(args, ["sample", "slot", "re", "im"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetcov",
        description="Jet covariances of random holomorphic sections: "
                    "exact, Monte Carlo, and scaling-limit experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def shared(p, mc: bool = False):
        p.add_argument("--seed", type=int, default=0,
                       help="master seed (default 0)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--out", default="-", help="output path (default stdout)")
        if mc:
            p.add_argument("--samples", type=int, default=100_000)
            p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK,
                           dest="chunk_size")

    p = sub.add_parser("limit-cov", help="limit jet covariance at given points")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--factor", type=float, default=None,
                   help="overall normalization (default m!)")
    shared(p)
    p.set_defaults(func=cmd_limit_cov, default_format="json")

    p = sub.add_parser("exact-cov", help="finite-N jet covariance from the kernel")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--model", choices=("bf", "gram-fs"), default="bf")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--scaled", action="store_true",
                   help="evaluate at points divided by sqrt(N)")
    shared(p)
    p.set_defaults(func=cmd_exact_cov, default_format="json")

    p = sub.add_parser("mc-cov", help="Monte Carlo jet covariance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--model", choices=("bf", "gram-fs"), default="bf")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--law", choices=COEFFICIENT_LAWS, required=True)
    p.add_argument("--scaled", action="store_true")
    shared(p, mc=True)
    p.set_defaults(func=cmd_mc_cov, default_format="json")

    p = sub.add_parser("converge", help="distance to the limit over a list of N")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--model", choices=("bf", "gram-fs"), default="bf")
    p.add_argument("--Ns", type=_int_list, required=True)
    p.add_argument("--comparison",
                   choices=("exact", "spherical-mc", "gaussian-mc"),
                   default="exact")
    p.add_argument("--timings", action="store_true",
                   help="report measured wall times (breaks byte-identical output)")
    shared(p, mc=True)
    p.set_defaults(func=cmd_converge, default_format="csv")

    p = sub.add_parser("pb", help="sphere-marginal normality sweep")
    p.add_argument("--d", type=_int_list, required=True,
                   help="comma-separated sphere dimensions")
    p.add_argument("--k", type=int, default=1)
    shared(p, mc=True)
    p.set_defaults(func=cmd_pb, default_format="csv")

    p = sub.add_parser("density", help="projection density on a grid")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--grid", type=_grid, required=True,
                   help="start:stop:count along the first coordinate")
    shared(p)
    p.set_defaults(func=cmd_density, default_format="csv")

    p = sub.add_parser("sample", help="draw jet vectors from the jet distribution")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--limit", action="store_true",
                   help="sample the limit covariance")
    p.add_argument("--factor", type=float, default=None)
    p.add_argument("--model", choices=("bf", "gram-fs"), default="bf")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--scaled", action="store_true")
    p.add_argument("--count", type=int, default=1)
    shared(p, mc=True)
    p.set_defaults(func=cmd_sample, default_format="json")

    return parser


#: Flags whose values may begin with '-' (negative coordinates, grids);
#: fused into --flag=value form so argparse does not read them as options.
_SIGNED_VALUE_FLAGS = {"--points", "--grid", "--factor"}


def _fuse_signed_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(tok + "=" + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = parser.parse_args(_fuse_signed_values(argv))
    if args.format is None:
        args.format = args.default_format
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures map to exit code 1
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
