"""Command-line front end: ``taxihyp <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from . import io as tio
from .circles import CircleSpec, Region, boundary, intersects_region, probe_region
from .curves import CurveError, l_shaped
from .hyperbolicity import (LN3, HALF_LN3, LineError, WitnessShortfall, delta_scan,
                            line_through, playfair_witnesses)
from .isometries import Isometry, cayley_table, is_isometry_witness
from .metric import DiskError, Point, distance, minimal_point, radius_of
from .oracle import GridSpec, OracleError, grid_shortest_path, minimizer_profile

DEFAULT_TOLERANCES = {
    "oracle_rel": 0.01,
    "membership": 1e-9,
    "gromov": 1e-9,
    "isometry": 1e-12,
}


class UsageError(Exception):
    pass


@dataclass
class Config:
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    format: str = "json"
    out: str | None = None


def _parse_tol(items) -> dict:
    tol = dict(DEFAULT_TOLERANCES)
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or name not in tol:
            raise UsageError(f"bad --tol {item!r}; known names: {', '.join(sorted(tol))}")
        try:
            tol[name] = float(value)
        except ValueError:
            raise UsageError(f"bad --tol value {value!r}") from None
    return tol


def _seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("TAXIHYP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TAXIHYP_SEED must be an integer, got {env!r}") from None


def _point(x1, x2) -> Point:
    try:
        return Point(x1, x2)
    except DiskError as exc:
        raise UsageError(str(exc)) from None


def _emit(cfg: Config, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _xy(p: Point) -> list:
    return [p.x1, p.x2]


def _need_format(cfg: Config, allowed):
    if cfg.format not in allowed:
        raise UsageError(f"--format {cfg.format} is not available here; use one of {allowed}")


# -- commands -----------------------------------------------------------------

def cmd_distance(args, cfg: Config) -> int:
    _need_format(cfg, ("json", "csv"))
    p, q = _point(*args.p), _point(*args.q)
    m = minimal_point(p, q)
    report = {
        "p": _xy(p), "q": _xy(q),
        "distance": distance(p, q),
        "minimal_point": _xy(m),
        "r_p": radius_of(p), "r_q": radius_of(q),
        "case": "same_point" if p == q else minimizer_profile(p, q),
    }
    if cfg.format == "json":
        _emit(cfg, tio.dumps(report))
    else:
        rows = ["name,value"]
        for k, v in report.items():
            if isinstance(v, list):
                rows.append(f"{k},{' '.join(tio.fmt(c) for c in v)}")
            elif isinstance(v, float):
                rows.append(f"{k},{tio.fmt(v)}")
            else:
                rows.append(f"{k},{v}")
        _emit(cfg, "\n".join(rows))
    return 0


def cmd_geodesic(args, cfg: Config) -> int:
    p, q = _point(*args.p), _point(*args.q)
    if p == q:
        raise UsageError("geodesic needs two distinct points")
    curve = l_shaped(p, q)
    if cfg.format == "csv":
        _emit(cfg, tio.curve_to_csv(curve))
    elif cfg.format == "svg":
        _emit(cfg, tio.svg_document([("geodesic", curve.as_array())], markers=[_xy(p), _xy(q)]))
    else:
        _emit(cfg, tio.curve_to_json(curve))
    return 0


def cmd_circle(args, cfg: Config) -> int:
    center = _point(*args.center)
    if not args.radius > 0:
        raise UsageError("radius must be positive")
    spec = CircleSpec(center, args.radius)
    bd = boundary(spec, args.samples)
    regions = {r.value: intersects_region(spec, r) for r in Region}
    status = 0
    mismatches = []
    if args.verify:
        mismatches = [r.value for r in Region if probe_region(spec, r) != regions[r.value]]
        dev = max(abs(distance(center, Point(*x)) - spec.radius) for x in bd.points())
        if mismatches or dev >= cfg.tolerances["membership"]:
            status = 1
    groups = [(pc.region.value, pc.points) for pc in bd.pieces]
    if cfg.format == "csv":
        _emit(cfg, tio.labelled_to_csv(groups))
    elif cfg.format == "svg":
        _emit(cfg, tio.svg_document(groups, markers=[_xy(center)]))
    else:
        report = {
            "center": _xy(center), "radius": spec.radius,
            "regions": regions,
            "pieces": [{"region": name, "points": pts} for name, pts in groups],
        }
        if args.verify:
            report["probe_mismatches"] = mismatches
        _emit(cfg, tio.dumps(report))
    return status


def cmd_oracle(args, cfg: Config) -> int:
    _need_format(cfg, ("json", "csv", "svg"))
    p, q = _point(*args.p), _point(*args.q)
    if not args.h > 0:
        raise UsageError("grid step h must be positive")
    try:
        g = GridSpec(step=args.h, margin=max(0.05, 10 * args.h))
        rep = grid_shortest_path(p, q, g)
    except OracleError as exc:
        raise UsageError(str(exc)) from None
    if cfg.format == "csv":
        _emit(cfg, tio.curve_to_csv(rep.path))
    elif cfg.format == "svg":
        _emit(cfg, tio.svg_document([("grid path", rep.path.as_array()),
                                     ("geodesic", l_shaped(*rep.query).as_array())]))
    else:
        _emit(cfg, tio.dumps(rep.to_json()))
    return 1 if rep.rel_error > cfg.tolerances["oracle_rel"] else 0


def cmd_gromov_scan(args, cfg: Config) -> int:
    _need_format(cfg, ("json",))
    if args.samples < 0:
        raise UsageError("samples must be >= 0")
    rep = delta_scan(args.samples, args.base, cfg.seed, families=not args.no_families)
    _emit(cfg, tio.dumps(rep.to_json()))
    bound = HALF_LN3 if args.base == "theta" else LN3
    return 1 if rep.max_required_delta > bound + cfg.tolerances["gromov"] else 0


def cmd_playfair(args, cfg: Config) -> int:
    a, b, p = _point(*args.line[:2]), _point(*args.line[2:]), _point(*args.point)
    try:
        line = line_through(a, b)
        lines = playfair_witnesses(line, p, args.n, cfg.seed)
    except LineError as exc:
        raise UsageError(str(exc)) from None
    except WitnessShortfall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg.format == "csv":
        groups = [("line", line.vertices)] + [(f"witness{k}", w.vertices) for k, w in enumerate(lines)]
        _emit(cfg, tio.labelled_to_csv(groups, label="line_label"))
    elif cfg.format == "svg":
        groups = [("line", line.vertices)] + [(f"witness{k}", w.vertices) for k, w in enumerate(lines)]
        _emit(cfg, tio.svg_document(groups, markers=[_xy(p)]))
    else:
        _emit(cfg, tio.dumps({
            "line": line.to_json(), "point": _xy(p), "n": args.n, "seed": cfg.seed,
            "witnesses": [w.to_json() for w in lines],
        }))
    return 0


def cmd_isometry_check(args, cfg: Config) -> int:
    _need_format(cfg, ("json",))
    if args.trials < 1:
        raise UsageError("trials must be >= 1")
    devs = {g.name.lower(): is_isometry_witness(g, args.trials, cfg.seed) for g in Isometry}
    table = cayley_table()
    closed = all(table[(g, h)] in Isometry for g, h in table)
    worst = max(devs.values())
    _emit(cfg, tio.dumps({"trials": args.trials, "seed": cfg.seed,
                          "max_deviation": devs, "closed_under_composition": closed}))
    return 0 if closed and worst < cfg.tolerances["isometry"] else 1


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (falls back to $TAXIHYP_SEED, then 0)")
    common.add_argument("--format", choices=("json", "csv", "svg"), default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help=f"override a tolerance ({', '.join(DEFAULT_TOLERANCES)})")

    parser = argparse.ArgumentParser(prog="taxihyp",
                                     description="Taxicab Poincare disk toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(sp):
        sp.add_argument("p", type=float, nargs=2, metavar=("P1", "P2"))
        sp.add_argument("q", type=float, nargs=2, metavar=("Q1", "Q2"))

    sp = sub.add_parser("distance", parents=[common], help="distance and minimal point")
    pair(sp)
    sp.set_defaults(func=cmd_distance, default_format="json")

    sp = sub.add_parser("geodesic", parents=[common], help="L-shaped minimiser")
    pair(sp)
    sp.set_defaults(func=cmd_geodesic, default_format="csv")

    sp = sub.add_parser("circle", parents=[common], help="circle boundary and regions")
    sp.add_argument("center", type=float, nargs=2, metavar=("C1", "C2"))
    sp.add_argument("radius", type=float)
    sp.add_argument("--samples", type=int, default=256, help="samples per boundary piece")
    sp.add_argument("--verify", action="store_true",
                    help="probe every region and check boundary membership")
    sp.set_defaults(func=cmd_circle, default_format="json")

    sp = sub.add_parser("oracle", parents=[common], help="grid shortest-path check")
    pair(sp)
    sp.add_argument("--h", type=float, default=0.005, help="grid step")
    sp.set_defaults(func=cmd_oracle, default_format="json")

    sp = sub.add_parser("gromov-scan", parents=[common], help="four-point delta scan")
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--base", choices=("theta", "random"), default="theta")
    sp.add_argument("--no-families", action="store_true",
                    help="random quadruples only")
    sp.set_defaults(func=cmd_gromov_scan, default_format="json")

    sp = sub.add_parser("playfair", parents=[common], help="lines through p missing a line")
    sp.add_argument("--line", type=float, nargs=4, required=True,
                    metavar=("A1", "A2", "B1", "B2"), help="two points fixing the line")
    sp.add_argument("--point", type=float, nargs=2, required=True, metavar=("P1", "P2"))
    sp.add_argument("-n", type=int, default=5)
    sp.set_defaults(func=cmd_playfair, default_format="json")

    sp = sub.add_parser("isometry-check", parents=[common], help="distance invariance of D4")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.set_defaults(func=cmd_isometry_check, default_format="json")
    return parser


def _plain_negatives(argv: list[str]) -> list[str]:
    # argparse mistakes "-4.5e-05" for an option flag; rewrite it in fixed notation
    out = []
    for tok in argv:
        if tok.startswith("-") and ("e" in tok or "E" in tok):
            try:
                tok = format(Decimal(tok), "f")
            except InvalidOperation:
                pass
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_plain_negatives(argv))
    try:
        cfg = Config(seed=_seed(args.seed), tolerances=_parse_tol(args.tol),
                     format=args.format or args.default_format, out=args.out)
        if getattr(args, "n", 0) < 0:
            raise UsageError("n must be >= 0")
        return args.func(args, cfg)
    except (UsageError, CurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
