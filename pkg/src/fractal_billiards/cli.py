"""Command-line front end: tables, orbits, sequences, paths, slopes, unfoldings.

Every command prints a JSON report on stdout and writes its files (JSON
and SVG) into the directory named by FRACTAL_BILLIARDS_OUT, or the current
directory when that is unset.

Exit codes: 0 success, 2 usage error, 3 geometric error (corner or
singularity), 4 depth or bounce budget exhausted.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import carpet, compat, serialize, unfold
from .billiard import GeometryError, OrbitStatus, State, run_orbit
from .exact import Q, SQRT3, Vec
from .tables import Family, build_square, build_table, build_triangle

EXIT_OK, EXIT_USAGE, EXIT_GEOMETRY, EXIT_BUDGET = 0, 2, 3, 4

NAMED_ANGLES = {
    "pi/6": (SQRT3, Q(1)),
    "pi/4": (Q(1), Q(1)),
    "pi/3": (Q(1), SQRT3),
    "pi/2": (Q(0), Q(1)),
    "3pi/4": (Q(-1), Q(1)),
}

FAMILY_ALIASES = {"koch": "koch", "ks": "koch", "t": "t", "carpet": "carpet",
                  "square": "square", "triangle": "triangle"}


class UsageError(ValueError):
    pass


def parse_direction(text: Optional[str], slope: Optional[str]) -> Vec:
    """A named angle, 'vec:X,Y' with exact components, or a rational slope."""
    if (text is None) == (slope is None):
        raise UsageError("give exactly one of --dir and --slope")
    if slope is not None:
        m = Fraction(slope)
        return Vec(Q(m.denominator), Q(m.numerator))
    t = text.strip().lower().replace(" ", "")
    if t in NAMED_ANGLES:
        return Vec(*NAMED_ANGLES[t])
    if t.startswith("vec:"):
        xs = t[4:].split(",")
        if len(xs) != 2:
            raise UsageError(f"bad direction vector {text!r}")
        v = Vec(serialize.parse_scalar(xs[0]), serialize.parse_scalar(xs[1]))
        if v.is_zero():
            raise UsageError("direction must be nonzero")
        return v
    raise UsageError(f"unknown direction {text!r}; use one of {', '.join(NAMED_ANGLES)} "
                     "or vec:X,Y")


def parse_point(x0: str, y0: str) -> Vec:
    return Vec(serialize.parse_scalar(x0), serialize.parse_scalar(y0))


def _family(name: str) -> Family:
    try:
        return Family(FAMILY_ALIASES[name.lower()])
    except KeyError:
        raise UsageError(f"unknown family {name!r}")


def _table_from_params(family: Family, params: Sequence[str]):
    ints = [int(p) for p in params]
    if family is Family.CARPET:
        if len(ints) != 2:
            raise UsageError("carpet needs A and N")
        return build_table(family, ints[1], ints[0])
    if family in (Family.SQUARE, Family.TRIANGLE):
        if len(ints) > 1:
            raise UsageError(f"{family.value} takes at most a level of 0")
        return build_table(family, 0)
    if len(ints) != 1:
        raise UsageError(f"{family.value} needs a level N")
    return build_table(family, ints[0])


def out_dir() -> Path:
    p = Path(os.environ.get("FRACTAL_BILLIARDS_OUT", "."))
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write(name: str, text: str) -> str:
    path = out_dir() / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _stem(*parts) -> str:
    return "_".join(re.sub(r"[^A-Za-z0-9.+-]", "-", str(p)) for p in parts)


def _emit(report: dict) -> None:
    sys.stdout.write(serialize.dumps(report))


# -- commands ------------------------------------------------------------------

def cmd_table(args) -> int:
    fam = _family(args.family)
    table = _table_from_params(fam, args.params)
    stem = _stem("table", fam.value, *args.params)
    body = serialize.table_to_json(table)
    files = []
    if args.json or not args.svg:
        files.append(_write(stem + ".json", serialize.dumps(body)))
    if args.svg:
        files.append(_write(stem + ".svg", serialize.render_table_svg(table)))
    _emit({"command": "table", "family": fam.value, "level": table.level,
           "n_sides": table.n_sides, "area": serialize.scalar_to_json(table.area()),
           "files": files})
    return EXIT_OK


def _status_code(status: OrbitStatus) -> int:
    if status is OrbitStatus.PERIODIC:
        return EXIT_OK
    if status is OrbitStatus.BUDGET_EXHAUSTED:
        return EXIT_BUDGET
    return EXIT_GEOMETRY


def cmd_orbit(args) -> int:
    fam = _family(args.family)
    table = _table_from_params(fam, args.params)
    init = State(parse_point(args.x0, args.y0), parse_direction(args.dir, args.slope))
    orbit = run_orbit(table, init, args.budget)
    stem = _stem("orbit", fam.value, *args.params, args.x0, args.dir or args.slope)
    body = serialize.orbit_to_json(orbit)
    files = [_write(stem + ".json", serialize.dumps(body)),
             _write(stem + ".svg", serialize.render_table_svg(
                 table, [serialize.orbit_polyline(orbit)]))]
    _emit({"command": "orbit", "status": orbit.status.value, "period": orbit.period,
           "bounces": len(orbit.entries) - 1, "files": files})
    return _status_code(orbit.status)


def cmd_compat(args) -> int:
    fam = _family(args.family)
    init = State(parse_point(args.x0, args.y0), parse_direction(args.dir, args.slope))
    seq = compat.build_sequence(fam, init, args.start_level, args.depth, args.budget, args.a)
    levels = []
    for lv in seq.levels:
        levels.append({"level": lv.level, "init": serialize.vec_to_json(lv.init.point),
                       "status": lv.orbit.status.value, "period": lv.orbit.period,
                       "orbit": serialize.orbit_to_json(lv.orbit)})
    constancy = str(compat.detect_constancy(seq)) if len(seq.levels) >= 2 else None
    hybrid = None
    if fam is Family.KOCH:
        hybrid = [compat.classify_hybrid(build_table(fam, lv.level), lv.orbit).is_hybrid
                  for lv in seq.levels if lv.orbit.is_periodic]
    body = {"family": fam.value, "direction": serialize.vec_to_json(seq.direction),
            "levels": levels, "constancy": constancy, "truncated": seq.truncated,
            "hybrid": hybrid}
    stem = _stem("compat", fam.value, args.x0, args.dir or args.slope, args.depth)
    panels = [(build_table(fam, lv.level, args.a), [serialize.orbit_polyline(lv.orbit)])
              for lv in seq.levels]
    files = [_write(stem + ".json", serialize.dumps(body))]
    if panels:
        files.append(_write(stem + ".svg", serialize.render_panels_svg(panels)))
    _emit({"command": "compat", "constancy": constancy,
           "statuses": [s.value for s in seq.statuses], "truncated": seq.truncated,
           "files": files})
    if seq.truncated:
        return EXIT_GEOMETRY
    codes = [_status_code(s) for s in seq.statuses]
    return max(codes) if codes else EXIT_OK


def _path_json(p: compat.NontrivialPath) -> dict:
    return {"descriptor": p.descriptor,
            "vertices": [serialize.vec_to_json(v) for v in p.vertices],
            "levels": p.vertex_levels,
            "decay_ratios": [str(r) for r in p.decay_ratios],
            "target_estimate": [round(p.target_estimate[0], 12), round(p.target_estimate[1], 12)],
            "error_bound": p.error_bound,
            "polylines": [[serialize.vec_to_json(v) for v in lv.polyline] for lv in p.levels]}


def cmd_path(args) -> int:
    fam = _family(args.family)
    if fam not in (Family.KOCH, Family.TFRACTAL):
        raise UsageError("paths are built for the koch and t families")
    seed = State(parse_point(args.x0, args.y0), parse_direction(args.dir, args.slope))
    paths = [compat.build_nontrivial_path(fam, s, args.depth)
             for s in (seed, compat.mirrored_seed(seed))]
    body = {"family": fam.value, "paths": [_path_json(p) for p in paths]}
    stem = _stem("path", fam.value, args.x0, args.dir or args.slope, args.depth)
    deepest = build_table(fam, args.depth)
    files = [_write(stem + ".json", serialize.dumps(body)),
             _write(stem + ".svg", serialize.render_table_svg(
                 deepest, [p.levels[-1].polyline for p in paths]))]
    _emit({"command": "path", "decay_ratios": [[str(r) for r in p.decay_ratios] for p in paths],
           "files": files})
    return EXIT_OK


def cmd_slopes(args) -> int:
    s = carpet.slope_sets(args.a)
    body = {"a": s.a, "A": [str(x) for x in sorted(s.A)], "B": [str(x) for x in sorted(s.B)]}
    files = [_write(_stem("slopes", args.a) + ".json", serialize.dumps(body))]
    _emit(dict(body, command="slopes", files=files))
    return EXIT_OK


def cmd_unfold(args) -> int:
    fam = _family(args.family)
    if fam not in (Family.SQUARE, Family.TRIANGLE):
        raise UsageError("unfold works on the square and triangle tiles")
    small = build_table(fam)
    init = State(parse_point(args.x0, args.y0), parse_direction(args.dir, args.slope))
    orbit = run_orbit(small, init, args.budget)
    if not orbit.is_periodic:
        _emit({"command": "unfold", "status": orbit.status.value})
        return _status_code(orbit.status)
    unf = unfold.unfold_orbit(small, orbit)
    build_big = build_square if fam is Family.SQUARE else build_triangle
    big = build_big(args.scale)
    big_orbit = unfold.reflect_unfold(small, orbit, big, args.budget)
    folded = unfold.fold_orbit(big, big_orbit, small) if big_orbit.is_periodic else []
    s = len(folded) // orbit.period if folded else 0
    body = {"period": orbit.period, "copies": unf.n_copies, "collinear": unf.is_collinear(),
            "segments": [[serialize.vec_to_json(p), serialize.vec_to_json(q)]
                         for p, q in unf.segments],
            "big_scale": args.scale, "big_status": big_orbit.status.value,
            "big_period": big_orbit.period, "repetitions": s,
            "fold_round_trip": bool(folded) and unfold.repeats(orbit, folded, s)}
    stem = _stem("unfold", fam.value, args.x0, args.dir or args.slope, args.scale)
    c = serialize.SvgCanvas()
    for g in unf.copies:
        c.polygon([g(p) for p in small.boundary], fill="#f4f1ea", stroke="#888888",
                  stroke_width="0.6")
    c.polyline([unf.segments[0][0]] + [q for _, q in unf.segments], fill="none",
               stroke="#c0392b", stroke_width="1")
    files = [_write(stem + ".json", serialize.dumps(body)), _write(stem + ".svg", c.render())]
    _emit({"command": "unfold", "copies": unf.n_copies, "collinear": body["collinear"],
           "fold_round_trip": body["fold_round_trip"], "files": files})
    return EXIT_OK


# -- fixtures ----------------------------------------------------------------------

FIXTURE_COMMANDS = [
    ("table_koch_2", ["table", "koch", "2", "--json"]),
    ("table_t_0", ["table", "t", "0", "--json"]),
    ("table_carpet_3_1", ["table", "carpet", "3", "1", "--json", "--svg"]),
    ("orbit_fagnano", ["orbit", "koch", "0", "--x0", "1/2", "--dir", "pi/3"]),
    ("orbit_square", ["orbit", "square", "--x0", "1/4", "--slope", "1"]),
    ("orbit_carpet_7_2", ["orbit", "carpet", "7", "2", "--x0", "0/1", "--slope", "2/3"]),
    ("compat_ks_7_12", ["compat", "koch", "--x0", "7/12", "--dir", "pi/3", "--depth", "3"]),
    ("slopes_7", ["slopes", "7"]),
    ("path_t", ["path", "t", "--x0", "4/3", "--dir", "pi/4", "--depth", "6"]),
    ("unfold_square", ["unfold", "square", "--x0", "1/3", "--slope", "1/2", "--scale", "3"]),
]


def seed_fixtures(target: Path) -> int:
    """Run the canned commands with output into ``target``/<name>/."""
    import contextlib
    import io

    target.mkdir(parents=True, exist_ok=True)
    old = os.environ.get("FRACTAL_BILLIARDS_OUT")
    try:
        for name, argv in FIXTURE_COMMANDS:
            os.environ["FRACTAL_BILLIARDS_OUT"] = str(target / name)
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                main(argv)
    finally:
        if old is None:
            os.environ.pop("FRACTAL_BILLIARDS_OUT", None)
        else:
            os.environ["FRACTAL_BILLIARDS_OUT"] = old
    print(f"wrote {len(FIXTURE_COMMANDS)} fixture sets to {target}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def _add_init(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x0", required=True, help="basepoint x (exact, e.g. 7/12)")
    p.add_argument("--y0", default="0", help="basepoint y (default 0)")
    p.add_argument("--dir", help="pi/6, pi/4, pi/3, pi/2, 3pi/4 or vec:X,Y")
    p.add_argument("--slope", help="rational slope, e.g. 2/3")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fractal-billiards", description=__doc__.split("\n")[0])
    ap.add_argument("--seed-fixtures", metavar="DIR", nargs="?", const="tests/fixtures",
                    help="regenerate the golden fixture files and exit")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("table", help="build a prefractal table")
    p.add_argument("family")
    p.add_argument("params", nargs="*", help="N, or A N for carpets")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("orbit", help="run one orbit")
    p.add_argument("family")
    p.add_argument("params", nargs="*")
    _add_init(p)
    p.add_argument("--budget", type=int, default=10000)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("compat", help="sequence of compatible orbits")
    p.add_argument("family")
    _add_init(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--start-level", type=int, default=0)
    p.add_argument("--a", type=int, default=None, help="carpet parameter")
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(func=cmd_compat)

    p = sub.add_parser("path", help="twin nontrivial paths")
    p.add_argument("family")
    _add_init(p)
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("slopes", help="carpet slope sets")
    p.add_argument("a", type=int)
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("unfold", help="unfold and fold an orbit of a tile")
    p.add_argument("family")
    _add_init(p)
    p.add_argument("--scale", type=int, default=3, help="side of the big table")
    p.add_argument("--budget", type=int, default=10000)
    p.set_defaults(func=cmd_unfold)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.seed_fixtures:
        return seed_fixtures(Path(args.seed_fixtures))
    if not args.command:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, GeometryError):
            print(f"geometric error: {exc}", file=sys.stderr)
            return EXIT_GEOMETRY
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
