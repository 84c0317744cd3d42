"""Command-line front end.

Subcommands: validate, dual, bound, place, attract, route, verify, gen,
lower-bound, export. Exit codes: 0 success or all checks passed, 1 a
verification failed (stuck trace, unroutable pair, counterexample),
2 input or usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .attraction import RegionError, TraceConfig, attract
from .decomposition import (DecompositionError, TetDecomposition, dual_graph,
                            validate)
from .fileio import (FormatError, decomposition_from_json_dict,
                     decomposition_to_json_dict, is_polygon_file,
                     polygon_from_json_dict, polygon_to_json_dict,
                     write_obj, write_off, write_path_json, write_path_obj)
from .generators import (FIGURE_NAMES, SpiralParams, figure_configuration,
                         spiral_polygon, spiral_polyhedron, stacked_hallways)
from .placement import BeaconPlacement, budget, check_placement, place_all
from .routing import falsify_lower_bound, route, verify_all_pairs

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_decomposition(path: str) -> TetDecomposition:
    return decomposition_from_json_dict(json.loads(_read_source(path)))


def _load_region(path: str):
    """Decomposition or 2D polygon, depending on file content."""
    text = _read_source(path)
    if is_polygon_file(text):
        poly = polygon_from_json_dict(json.loads(text))
        return [(float(x), float(y)) for x, y in poly]
    return decomposition_from_json_dict(json.loads(text))


def _parse_point(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise FormatError(f"expected 'x,y[,z]', got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise FormatError(f"bad coordinate in {text!r}") from None


def _parse_beacons(spec: str, d) -> list[tuple]:
    """Beacon list from an inline 'x,y,z;x,y,z' string or a JSON file.

    Files may be a certificate (vertex indices resolved against the
    decomposition), an object with a "beacons" list, or a bare list of
    either points or vertex indices.
    """
    path = Path(spec)
    if ";" in spec or ("," in spec and not path.exists()):
        return [_parse_point(part) for part in spec.split(";") if part]
    data = json.loads(path.read_text())
    if isinstance(data, dict):
        data = data.get("beacons", data)
    if not isinstance(data, list):
        raise FormatError(f"cannot read beacons from {spec!r}")
    out = []
    for entry in data:
        if isinstance(entry, int):
            if d is None or not isinstance(d, TetDecomposition):
                raise FormatError("vertex-index beacons need a decomposition")
            out.append(d.vertices[entry].to_floats())
        elif isinstance(entry, list):
            out.append(tuple(float(c) for c in entry))
        else:
            raise FormatError(f"bad beacon entry {entry!r}")
    return out


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _run_report(command: str, source_text: str, results: dict,
                started: float) -> dict:
    return {
        "command": command,
        "inputDigest": hashlib.sha256(source_text.encode()).hexdigest(),
        "timings": {"seconds": round(time.time() - started, 3)},
        "results": results,
        "toolVersion": __version__,
    }


def cmd_validate(args) -> int:
    d = _load_decomposition(args.file)
    report = validate(d)
    if report.ok:
        print(f"valid: {d.m} tetrahedra, {len(d.vertices)} vertices")
        return EXIT_OK
    print(f"{len(report.violations)} violations:", file=sys.stderr)
    for v in report.violations:
        print(f"  {v}", file=sys.stderr)
    return EXIT_INPUT


def cmd_dual(args) -> int:
    d = _load_decomposition(args.file)
    g = dual_graph(d)
    if args.dot:
        _emit(g.to_dot(), args.output)
    else:
        _emit(json.dumps(g.to_json_dict(), indent=2), args.output)
    return EXIT_OK


def cmd_bound(args) -> int:
    d = _load_decomposition(args.file)
    print(f"m={d.m}, budget={budget(d.m)}")
    return EXIT_OK


def cmd_place(args) -> int:
    d = _load_decomposition(args.file)
    report = validate(d)
    if not report.ok:
        print(f"invalid decomposition:\n{report}", file=sys.stderr)
        return EXIT_INPUT
    placement = place_all(d, seed=args.seed)
    print(placement.summary())
    if args.certificate:
        _emit(json.dumps(placement.to_json_dict(), indent=2), args.certificate)
    return EXIT_OK


def cmd_attract(args) -> int:
    region = _load_region(args.file)
    cfg = TraceConfig()
    path = attract(_parse_point(args.point), _parse_point(args.beacon),
                   region, cfg)
    status = "reached" if path.reached else "stuck"
    terminal = ",".join(f"{c:.12g}" for c in path.terminal)
    print(f"{status} after {path.events} events at {terminal}")
    if args.path:
        write_path_json(path, args.path)
    if args.obj:
        write_path_obj(path, args.obj)
    return EXIT_OK if path.reached else EXIT_FAIL


def cmd_route(args) -> int:
    region = _load_region(args.file)
    d = region if isinstance(region, TetDecomposition) else None
    beacons = _parse_beacons(args.beacons, d) if args.beacons else []
    result = route(_parse_point(args.source), _parse_point(args.target),
                   beacons, region)
    if result.routable:
        chain = " -> ".join(",".join(f"{c:.12g}" for c in b)
                            for b in result.chain) or "(direct)"
        print(f"routable via {len(result.chain)} activations: {chain}")
        return EXIT_OK
    print("not routable")
    return EXIT_FAIL


def cmd_verify(args) -> int:
    started = time.time()
    source = _read_source(args.file)
    d = decomposition_from_json_dict(json.loads(source))
    beacons = _parse_beacons(args.beacons, d) if args.beacons else []
    report = verify_all_pairs(d, beacons, extra_samples=args.extra,
                              seed=args.seed)
    print(f"checked {report.pairs_checked} ordered pairs over "
          f"{report.samples} samples with {report.beacons} beacons: "
          f"{'all routable' if report.ok else f'{len(report.failures)} failures'}")
    for f in report.failures[:20]:
        print(f"  fail: {f.source} -> {f.target}", file=sys.stderr)
    if args.report:
        _emit(json.dumps(_run_report("verify", source, report.to_json_dict(),
                                     started), indent=2), args.report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.family == "spiral3d":
        d = spiral_polyhedron(SpiralParams(args.corners, Fraction(args.delta)))
        _emit(json.dumps(decomposition_to_json_dict(d), indent=2), args.output)
    elif args.family == "spiral2d":
        polygon = spiral_polygon(SpiralParams(args.corners, Fraction(args.delta)))
        _emit(json.dumps(polygon_to_json_dict(polygon), indent=2), args.output)
    elif args.family == "figure":
        d = figure_configuration(args.name)
        _emit(json.dumps(decomposition_to_json_dict(d), indent=2), args.output)
    elif args.family == "tower":
        d = stacked_hallways(args.levels, seed=args.seed, caps=args.caps,
                             splits=args.splits)
        _emit(json.dumps(decomposition_to_json_dict(d), indent=2), args.output)
    else:
        raise FormatError(f"unknown family {args.family!r}")
    return EXIT_OK


def cmd_lower_bound(args) -> int:
    started = time.time()
    report = falsify_lower_bound(args.corners, args.budget, args.grid)
    if report.ok:
        print(f"no routing subset of {args.budget} beacons found over "
              f"{report.candidates} candidates ({report.subsets_checked} subsets)")
    else:
        print("counterexample found (check the tracer before doubting the "
              f"construction): {report.counterexample}", file=sys.stderr)
    if args.report:
        _emit(json.dumps(_run_report("lower-bound", json.dumps(vars(args),
                                                               default=str),
                                     report.to_json_dict(), started),
              indent=2), args.report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_export(args) -> int:
    d = _load_decomposition(args.file)
    if args.format == "off":
        write_off(d, args.output)
    elif args.format == "obj":
        write_obj(d, args.output)
    else:
        raise FormatError(f"unknown format {args.format!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tetrabeacon",
        description="Beacon routing in tetrahedral decompositions")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a decomposition file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dual", help="export the dual graph")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("bound", help="print m and the beacon budget")
    p.add_argument("file")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("place", help="compute a beacon placement certificate")
    p.add_argument("file")
    p.add_argument("--certificate", default=None, help="write certificate JSON")
    p.add_argument("--seed", type=int, default=0, help="spanning-tree tie-break")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("attract", help="trace one attraction path")
    p.add_argument("file")
    p.add_argument("--point", required=True, help="x,y[,z]")
    p.add_argument("--beacon", required=True, help="x,y[,z]")
    p.add_argument("--path", default=None, help="write path JSON")
    p.add_argument("--obj", default=None, help="write path OBJ polyline")
    p.set_defaults(func=cmd_attract)

    p = sub.add_parser("route", help="route a point to a target via beacons")
    p.add_argument("file")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--beacons", default=None,
                   help="JSON file or inline x,y,z;x,y,z")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("verify", help="all-pairs routability with a beacon set")
    p.add_argument("file")
    p.add_argument("--beacons", required=True)
    p.add_argument("--extra", type=int, default=0, help="extra random samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None, help="write report JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate instances")
    gen_sub = p.add_subparsers(dest="family", required=True)
    g = gen_sub.add_parser("spiral3d")
    g.add_argument("--corners", type=int, required=True)
    g.add_argument("--delta", default="2/5")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)
    g = gen_sub.add_parser("spiral2d")
    g.add_argument("--corners", type=int, required=True)
    g.add_argument("--delta", default="2/5")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)
    g = gen_sub.add_parser("figure")
    g.add_argument("--name", required=True, choices=FIGURE_NAMES)
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)
    g = gen_sub.add_parser("tower")
    g.add_argument("--levels", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--caps", type=int, default=None)
    g.add_argument("--splits", type=int, default=None)
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("lower-bound", help="exhaustive sub-budget search on a spiral")
    p.add_argument("--corners", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--grid", type=int, default=5, help="samples per hallway")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("export", help="export the boundary mesh")
    p.add_argument("file")
    p.add_argument("--format", required=True, choices=("off", "obj"))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FormatError, DecompositionError, RegionError, ValueError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
