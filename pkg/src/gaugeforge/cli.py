"""Command-line driver: scenario build, map evaluation/inversion, suite
verification, and 2-D slice export.

Exit codes: 0 success, 1 check failure, 2 usage or config error,
3 construction error.  All I/O is JSON/CSV/SVG; outputs are deterministic
for identical inputs (wall time goes to stderr, never into report files).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .deletion import DeletionMap, TheoremMap, build_theorem_map, evaluate
from .errors import ConfigError, DomainTruncation, GaugeForgeError, UnknownSuite
from .gauges import Body
from .seqspace import SparseVec
from .tower import TowerScenario, build_scenario, canonical_config, normalize_config, scenario_digest
from .verify import SUITES, VerifyContext, run_suite

BUNDLE_FORMAT = "gaugeforge-bundle-v1"


def _error_object(exc: Exception) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True)


def _threads_from_env() -> int:
    raw = os.environ.get("GAUGEFORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"GAUGEFORGE_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise ConfigError("GAUGEFORGE_THREADS must be >= 1")
    return n  # evaluation is sequential; the env var caps, and 1 <= cap holds


def write_bundle(scenario: TowerScenario, path: str) -> None:
    bundle = {
        "format": BUNDLE_FORMAT,
        "version": __version__,
        "config": scenario.config,
        "digest": scenario.digest,
        "constants": scenario.constants_json(),
        "certificates": [c.to_json() for c in scenario.certificates],
    }
    with open(path, "w") as fh:
        json.dump(bundle, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_bundle(path: str) -> TowerScenario:
    """Rebuild the scenario from the bundle's config; the build is
    deterministic so recorded constants must match exactly."""
    with open(path) as fh:
        bundle = json.load(fh)
    if bundle.get("format") != BUNDLE_FORMAT:
        raise ConfigError(f"not a bundle file: {path}")
    scenario = build_scenario(bundle["config"])
    if scenario.digest != bundle["digest"]:
        raise ConfigError("bundle digest does not match its config")
    if scenario.constants_json() != bundle["constants"]:
        raise ConfigError("bundle constants do not match a fresh build (stale bundle?)")
    return scenario


def _read_point(raw: str) -> SparseVec:
    if raw.startswith("@"):
        with open(raw[1:]) as fh:
            return SparseVec.from_json(json.load(fh))
    return SparseVec.from_json(json.loads(raw))


def cmd_build(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    scenario = build_scenario(config)
    write_bundle(scenario, args.out)
    print(json.dumps({"bundle": args.out, "digest": scenario.digest,
                      "levels": scenario.N_max,
                      "certificates": len(scenario.certificates),
                      "all_hold": all(c.holds for c in scenario.certificates)},
                     sort_keys=True))
    return 0


def _context(scenario: TowerScenario, need_theorem: bool = True) -> VerifyContext:
    deletion = DeletionMap(scenario)
    theorem = build_theorem_map(scenario) if need_theorem else None
    return VerifyContext(scenario, deletion, theorem)


def cmd_eval(args, invert: bool) -> int:
    scenario = load_bundle(args.bundle)
    point = _read_point(args.point)
    which = {"psi": "psi", "Psi": "Psi", "h": "h"}[args.map]
    if invert:
        which = {"psi": "Psi", "Psi": "psi", "h": "h_inv"}[args.map]
    ctx = _context(scenario, need_theorem=which in ("h", "h_inv"))
    target = ctx.theorem if which in ("h", "h_inv") else ctx.deletion
    try:
        result = evaluate(target, point, which)
    except DomainTruncation as exc:
        print(json.dumps({"error": "DomainTruncation", "message": str(exc),
                          "deepest": exc.deepest}, sort_keys=True))
        return 1
    print(json.dumps(result.to_json(), sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    scenario = load_bundle(args.bundle)
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UnknownSuite(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    ctx = _context(scenario)
    lines = []
    all_pass = True
    total_wall = 0.0
    for name in names:
        report = run_suite(name, ctx, args.seed, args.budget)
        total_wall += report.wall_time_s
        lines.append(report.to_jsonl())
        all_pass &= report.passed
        print(f"suite {name}: {'PASS' if report.passed else 'FAIL'} "
              f"({len(report.records)} checks)", file=sys.stderr)
    payload = "".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    print(f"wall_time_s {total_wall:.3f}", file=sys.stderr)
    return 0 if all_pass else 1


# --- slices -----------------------------------------------------------------

def _parse_slice_spec(obj: dict, scenario: TowerScenario):
    u = SparseVec.from_json(obj["u"])
    v = SparseVec.from_json(obj["v"])
    if u.is_zero() or v.is_zero():
        raise ConfigError("slice basis vectors must be nonzero")
    # linear independence: v minus its projection on u must not vanish
    uu = sum(val * val for _, val in u.items())
    uv = sum(u.get(i) * val for i, val in v.items())
    if (v.axpy(-uv / uu, u)).sup_norm() <= 1e-12:
        raise ConfigError("slice basis vectors must be linearly independent")
    origin = SparseVec.from_json(obj.get("origin", []))
    extent = float(obj.get("extent", 4.0))
    resolution = int(obj.get("resolution", 21))
    if resolution < 2:
        raise ConfigError("slice resolution must be at least 2")
    fields = list(obj.get("fields", ["shell"]))
    return u, v, origin, extent, resolution, fields


def _plane_coords(p: SparseVec, u: SparseVec, v: SparseVec) -> tuple[float, float]:
    uu = sum(val * val for _, val in u.items())
    vv = sum(val * val for _, val in v.items())
    uv = sum(u.get(i) * val for i, val in v.items())
    pu = sum(u.get(i) * val for i, val in p.items())
    pv = sum(v.get(i) * val for i, val in p.items())
    det = uu * vv - uv * uv
    return (pu * vv - pv * uv) / det, (pv * uu - pu * uv) / det


def _fmt(x: float) -> str:
    return repr(float(x))


def _slice_cell(ctx: VerifyContext, field: str, x: SparseVec) -> list[str]:
    scenario = ctx.scenario
    if field.startswith("gauge:"):
        body = scenario.bodies.get(field[6:])
        if body is None or not isinstance(body, Body):
            raise ConfigError(f"unknown body {field[6:]!r}")
        return [_fmt(body.gauge(x))]
    if field == "shell":
        n = ctx.deletion.locate_shell(x)
        return ["" if n is None else str(n)]
    if field.startswith("map:") or field.startswith("dispnorm:"):
        name = field.split(":", 1)[1]
        try:
            if name == "psi":
                out = ctx.deletion.psi(x)
            elif name == "Psi":
                out = ctx.deletion.psi_inverse(x)
            elif name == "h":
                out = ctx.theorem.forward(x)
            else:
                raise ConfigError(f"unknown map field {name!r}")
        except DomainTruncation:
            return [""] if field.startswith("dispnorm:") else ["", ""]
        if field.startswith("dispnorm:"):
            return [_fmt((out - x).sup_norm())]
        return [_fmt(c) for c in _plane_coords(out - x, *_slice_cell.basis)]
    raise ConfigError(f"unknown slice field {field!r}")


def cmd_slice(args) -> int:
    scenario = load_bundle(args.bundle)
    with open(args.spec) as fh:
        spec = json.load(fh)
    u, v, origin, extent, resolution, fields = _parse_slice_spec(spec, scenario)
    needs_theorem = any(f.endswith(":h") for f in fields)
    ctx = _context(scenario, need_theorem=needs_theorem)
    _slice_cell.basis = (u, v)

    header = ["s", "t"]
    for f in fields:
        if f.startswith("map:"):
            header += [f"{f[4:]}_u", f"{f[4:]}_v"]
        else:
            header.append(f.replace(":", "_"))
    rows = [",".join(header)]
    grid = [(-extent + 2.0 * extent * k / (resolution - 1)) for k in range(resolution)]
    for s in grid:
        for t in grid:
            x = origin.axpy(s, u).axpy(t, v)
            cells = [_fmt(s), _fmt(t)]
            for f in fields:
                cells.extend(_slice_cell(ctx, f, x))
            rows.append(",".join(cells))
    payload = "\n".join(rows) + "\n"
    with open(args.out, "w") as fh:
        fh.write(payload)
    if args.svg:
        _write_svg(args.svg, grid, fields, payload)
    print(json.dumps({"csv": args.out, "rows": len(rows) - 1}, sort_keys=True))
    return 0


def _write_svg(path: str, grid, fields, csv_payload: str) -> None:
    """Grayscale heat map of the first numeric field; deterministic output."""
    lines = csv_payload.strip().split("\n")
    header = lines[0].split(",")
    col = 2 if len(header) > 2 else None
    n = len(grid)
    cell = 12
    values = {}
    vmax = 0.0
    for row in lines[1:]:
        parts = row.split(",")
        if col is None or col >= len(parts) or parts[col] == "":
            continue
        val = abs(float(parts[col]))
        values[(parts[0], parts[1])] = val
        vmax = max(vmax, val)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{n * cell}" height="{n * cell}">']
    for i, s in enumerate(grid):
        for j, t in enumerate(grid):
            val = values.get((_fmt(s), _fmt(t)))
            if val is None:
                shade = 255
            else:
                shade = int(round(255 * (1.0 - min(val / vmax, 1.0)))) if vmax > 0 else 255
            out.append(
                f'<rect x="{i * cell}" y="{(n - 1 - j) * cell}" width="{cell}" '
                f'height="{cell}" fill="rgb({shade},{shade},{shade})"/>'
            )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaugeforge",
                                     description="starlike-body gauge and deletion-map engine")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build and freeze a scenario bundle")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    for name in ("eval", "invert"):
        p = sub.add_parser(name, help=f"{name} a map at a point")
        p.add_argument("--bundle", required=True)
        p.add_argument("--map", required=True, choices=["psi", "Psi", "h"])
        p.add_argument("--point", required=True, help="JSON pairs or @file")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--bundle", required=True)
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--out", default=None)

    p = sub.add_parser("slice", help="export a 2-D slice as CSV (optional SVG)")
    p.add_argument("--bundle", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        _threads_from_env()
        if args.command == "build":
            return cmd_build(args)
        if args.command == "eval":
            return cmd_eval(args, invert=False)
        if args.command == "invert":
            return cmd_eval(args, invert=True)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "slice":
            return cmd_slice(args)
        parser.error(f"unknown command {args.command!r}")
    except (ConfigError, UnknownSuite) as exc:
        print(_error_object(exc), file=sys.stderr)
        return 2
    except GaugeForgeError as exc:
        print(_error_object(exc), file=sys.stderr)
        return 3
    except OSError as exc:
        print(_error_object(exc), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
