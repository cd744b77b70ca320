"""Command-line interface: ``flatcone <subcommand> ...``.

Results go to standard output as JSON (one object per line) or CSV;
diagnostics go to standard error. Exit status is 2 for unusable input,
1 when ``is-qd`` decides "no", and 0 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .chains import (Chain, chain_invariants, cone_angle_bounds, estimate_cone_angle_from_surface,
                     parse_theta_pi, perfectly_interlaced, sweep_count)
from .errors import FlatConeError, OpenLoop, SurfaceError, WordInvalidOnB
from .geodesics import (ConePointHit, DirectedPoint, Side, density_profile, is_admissible_limit_path,
                        reverse_trace, trace, trace_through_cones)
from .holonomy import holonomy_condition, is_quadratic_differential_metric
from .rational import pi_text
from .saddles import enumerate_saddle_connections
from .spectrum import compare_spectra, load_words, marked_spectrum
from .surface import FlatConeSurface, load_surface

FIXTURES = ("torus", "octagon", "l_shape", "halftrans", "badangle")
GOLDEN = (1 + math.sqrt(5)) / 2


class InputError(Exception):
    """Bad command-line input (exit status 2)."""


def resolve_surface_path(name: str) -> Path:
    """A path as given, or the bundled fixture of that name."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in FIXTURES and p.parent == Path("."):
        return Path(str(resources.files("flatcone") / "fixtures" / f"{stem}.json"))
    raise InputError(f"{name}: no such file (bundled surfaces: {', '.join(FIXTURES)})")


def _load(args, name: str) -> FlatConeSurface:
    kwargs = {"keep_marked_points": getattr(args, "marked", False)}
    if args.epsilon is not None:
        kwargs["eps_geom"] = args.epsilon
    return load_surface(resolve_surface_path(name), **kwargs)


def _num(x):
    """Floats rounded to 12 significant digits so output is stable across platforms."""
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        if abs(x) < 1e-12:
            return 0.0
        return float(f"{x:.12g}")
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


class Writer:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self._csv = None
        self._fields = None

    def row(self, record: dict) -> None:
        record = _clean(record)
        if self.fmt == "json":
            self.out.write(json.dumps(record, sort_keys=False) + "\n")
            return
        if self._csv is None:
            self._fields = list(record)
            self._csv = csv.DictWriter(self.out, fieldnames=self._fields, lineterminator="\n",
                                       extrasaction="ignore")
            self._csv.writeheader()
        flat = {k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in record.items()}
        self._csv.writerow(flat)


def _cone_record(surface: FlatConeSurface, p) -> dict:
    return {"id": p.id, "angle_pi": str(p.angle_pi) if p.exact else None,
            "angle_text": pi_text(p.angle_pi) if p.exact else f"{p.angle!r}",
            "angle": p.angle, "corners": [list(c) for c in p.vertex_class]}


# -- subcommands -------------------------------------------------------------

def cmd_validate(args, w: Writer) -> int:
    s = _load(args, args.surface)
    w.row({"charts": len(s.charts), "gluings": len(s.gluings),
           "vertex_classes": len(s.vertex_classes), "chi": s.euler_characteristic,
           "genus": s.genus, "cone_points": [_cone_record(s, p) for p in s.cone_points]})
    return 0


def cmd_angles(args, w: Writer) -> int:
    s = _load(args, args.surface)
    for p in s.cone_points:
        r = _cone_record(s, p)
        del r["corners"]
        w.row(r)
    return 0


def cmd_is_qd(args, w: Writer) -> int:
    s = _load(args, args.surface)
    d = is_quadratic_differential_metric(s)
    w.row(d.to_dict())
    if not d.yes:
        for reason in d.reasons:
            print(f"no: {reason}", file=sys.stderr)
    return 0 if d.yes else 1


def cmd_holonomy(args, w: Writer) -> int:
    s = _load(args, args.surface)
    rep = holonomy_condition(s)
    if w.fmt == "json":
        w.row(rep.to_dict())
        return 0
    for lp, r in rep.generator_rotations:
        w.row({"loop": lp.label, "rotation_pi": str(r.fraction), "word": lp.to_json()})
    for p, r in rep.cone_rotations:
        w.row({"loop": f"cone{p.id}", "rotation_pi": str(r.fraction), "word": []})
    return 0


def _random_start(surface: FlatConeSurface, rng: random.Random, chart_id: int | None):
    """A uniformly random point of a random triangle of the chosen chart."""
    tri = surface.triangulation
    cid = surface.charts[0].id if chart_id is None else chart_id
    ts = [t for t in tri.triangles if t.chart == cid]
    t = rng.choice(ts)
    a, b = rng.random(), rng.random()
    if a + b > 1:
        a, b = 1 - a, 1 - b
    p0, p1, p2 = t.points
    x = p0[0] + a * (p1[0] - p0[0]) + b * (p2[0] - p0[0])
    y = p0[1] + a * (p1[1] - p0[1]) + b * (p2[1] - p0[1])
    return cid, (x, y)


def _start(args, surface: FlatConeSurface) -> DirectedPoint:
    rng = random.Random(args.seed)
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise InputError("--x and --y must be given together")
        chart = surface.charts[0].id if args.chart is None else args.chart
        pos = (args.x, args.y)
    else:
        chart, pos = _random_start(surface, rng, args.chart)
    if args.angle is not None and args.slope is not None:
        raise InputError("give at most one of --angle and --slope")
    if args.angle is not None:
        angle = args.angle
    elif args.slope is not None:
        angle = math.atan(args.slope)
    else:
        angle = rng.uniform(0, 2 * math.pi)
    try:
        surface.chart(chart)
    except KeyError:
        raise InputError(f"no chart {chart}") from None
    return DirectedPoint(chart, pos, angle)


def _end_text(path) -> str:
    t = path.terminal
    if isinstance(t, ConePointHit):
        return f"cone point {t.cone_point} at chart {t.chart} vertex {t.vertex}"
    return "length reached"


def _point_text(p: DirectedPoint) -> str:
    return f"chart {p.chart} ({_num(p.position.x)}, {_num(p.position.y)}) direction {_num(p.direction)}"


def cmd_trace(args, w: Writer) -> int:
    s = _load(args, args.surface)
    start = _start(args, s)
    if args.sides is not None:
        try:
            sides = [Side.parse(c) for c in args.sides]
        except ValueError as exc:
            raise InputError(f"--sides: {exc}") from None
        lp = trace_through_cones(s, start, args.max_length, sides)
        legs, conts = lp.legs, lp.continuations
    else:
        legs, conts = [trace(s, start, args.max_length)], []
    for i, leg in enumerate(legs):
        for seg in leg.segments:
            w.row({"leg": i, "chart": seg.chart, "x0": seg.start.x, "y0": seg.start.y,
                   "x1": seg.end.x, "y1": seg.end.y, "length": seg.length})
    print(f"traced length {sum(leg.length for leg in legs):.12g}: {_end_text(legs[-1])}",
          file=sys.stderr)
    for c in conts:
        print(f"turn {c.side.value} at cone point {c.cone_point}: arrival {_num(c.arrival_direction)} "
              f"departure {_num(c.departure_direction)} (cone coordinates)", file=sys.stderr)
    if args.sides is not None:
        used = "".join(c.side.value for c in conts)
        print(f"sides used {used or '-'}; admissible {'yes' if is_admissible_limit_path(sides) else 'no'}",
              file=sys.stderr)
    if args.reverse:
        back = reverse_trace(s, legs[-1])
        print(f"reversed: {_end_text(back)}; end {_point_text(back.end)}; "
              f"leg start {_point_text(legs[-1].start)}", file=sys.stderr)
    return 0


def cmd_saddles(args, w: Writer) -> int:
    s = _load(args, args.surface)
    for sc in enumerate_saddle_connections(s, args.length_bound):
        w.row(sc.to_record())
    return 0


def _chain(text: str, phi0: float) -> Chain:
    try:
        return Chain(parse_theta_pi(text), phi0)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cone angle {text!r}: {exc}") from None


def cmd_chain(args, w: Writer) -> int:
    if (args.theta_pi is None) == (args.surface is None):
        raise InputError("give exactly one of --theta-pi and --surface")
    if args.surface is not None:
        s = _load(args, args.surface)
        if not 0 <= args.cone < len(s.vertex_classes):
            raise InputError(f"no vertex class {args.cone}")
        est = estimate_cone_angle_from_surface(s, args.cone, args.n_max, phi0=args.phi0)
        chain, intervals = est.chain, est.intervals
    else:
        chain = _chain(args.theta_pi, args.phi0 or 0.0)
        intervals = [cone_angle_bounds(chain, n) for n in range(1, args.n_max + 1)]
    inv = chain_invariants(chain)
    for iv in intervals:
        w.row({"n": iv.n, "R": iv.R, "lower_pi": str(iv.lo_pi), "upper_pi": str(iv.hi_pi),
               "periodic": inv.periodic, "k": inv.k, "ccw_step": inv.n})
    if args.against is not None:
        d = perfectly_interlaced(chain, _chain(args.against, args.against_phi0))
        print("interlaced: {}{} ({})".format("yes" if d.holds else "no",
                                             ", approximate" if d.approximate else "", d.reason),
              file=sys.stderr)
    return 0


def cmd_spectrum(args, w: Writer) -> int:
    s = _load(args, args.surface)
    words = load_words(args.words)
    for i, e in enumerate(marked_spectrum(s, words)):
        w.row({"word_id": i, "length": e.length, "iterations": e.tightening_iterations,
               "flat_strip": e.flat_strip_flag, "error": e.error or ""})
        if e.error:
            print(f"word {i}: {e.error}", file=sys.stderr)
    return 0


def cmd_compare(args, w: Writer) -> int:
    a = _load(args, args.surface)
    b = _load(args, args.other)
    rep = compare_spectra(a, b, load_words(args.words))
    for i, la, lb, ratio in rep.rows:
        w.row({"word_id": i, "length_a": la, "length_b": lb, "ratio": ratio})
    print(f"max relative difference {rep.max_relative_difference:.12g}", file=sys.stderr)
    return 0


def cmd_density(args, w: Writer) -> int:
    s = _load(args, args.surface)
    if args.angle is None and args.slope is None:
        args.angle = math.atan(GOLDEN)
    start = _start(args, s)
    prof = density_profile(s, start, args.max_length, args.grid)
    w.row({"coverage": prof.coverage, "entered": prof.entered, "cells": prof.cells,
           "length": prof.length, "grid": args.grid})
    return 0


# -- parser ------------------------------------------------------------------

def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"{text!r} must be positive")
        return v
    return conv


def _nonnegative(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
        if not v >= 0:
            raise argparse.ArgumentTypeError(f"{text!r} must not be negative")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default depends on the subcommand)")
    common.add_argument("--epsilon", type=_positive(float), default=None,
                        help="geometric tolerance for gluing checks")
    common.add_argument("--marked", action="store_true",
                        help="treat flat vertices as marked points")
    common.add_argument("--seed", type=int, default=0, help="seed for random starts (default 0)")

    start = argparse.ArgumentParser(add_help=False)
    start.add_argument("--chart", type=int, default=None, help="start chart id")
    start.add_argument("--x", type=float, default=None)
    start.add_argument("--y", type=float, default=None)
    start.add_argument("--angle", type=float, default=None, help="direction in radians")
    start.add_argument("--slope", type=float, default=None, help="direction as dy/dx")

    parser = argparse.ArgumentParser(prog="flatcone",
                                     description="Flat cone surfaces from glued polygons.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, parents=(common,), default_format="json"):
        p = sub.add_parser(name, parents=list(parents), help=help_text, description=help_text)
        p.set_defaults(func=func, default_format=default_format)
        return p

    surf = "surface JSON file or bundled name ({})".format(", ".join(FIXTURES))
    add("validate", cmd_validate, "check a surface and report its topology").add_argument(
        "surface", help=surf)
    add("angles", cmd_angles, "list cone points and their angles").add_argument(
        "surface", help=surf)
    add("is-qd", cmd_is_qd, "decide whether the metric comes from a quadratic differential"
        ).add_argument("surface", help=surf)
    add("holonomy", cmd_holonomy, "rotations of generating loops and cone loops").add_argument(
        "surface", help=surf)

    p = add("trace", cmd_trace, "trace a geodesic", parents=(common, start))
    p.add_argument("surface", help=surf)
    p.add_argument("--max-length", type=_nonnegative(float), default=10.0)
    p.add_argument("--sides", default=None,
                   help="turn by pi at successive cone points on these sides, e.g. LRR")
    p.add_argument("--reverse", action="store_true", help="trace the last leg back and report where it ends")

    p = add("saddles", cmd_saddles, "enumerate saddle connections up to a length")
    p.add_argument("surface", help=surf)
    p.add_argument("--length-bound", type=_positive(float), default=5.0)

    p = add("chain", cmd_chain, "sweep counts, angle bounds and invariants of a chain",
            default_format="csv")
    p.add_argument("--theta-pi", help="cone angle over pi, e.g. 5/2")
    p.add_argument("--surface", help="estimate the angle of a vertex class of this surface instead")
    p.add_argument("--cone", type=int, default=0, help="vertex class id for --surface (default 0)")
    p.add_argument("--n-max", type=_positive(int), default=10)
    p.add_argument("--phi0", type=float, default=None, help="first direction of the chain")
    p.add_argument("--against", help="second cone angle over pi: report whether the chains interlace")
    p.add_argument("--against-phi0", type=float, default=0.0)

    p = add("spectrum", cmd_spectrum, "lengths of closed geodesics for a words file",
            default_format="csv")
    p.add_argument("surface", help=surf)
    p.add_argument("words", help="JSON list of words [[chart, edge, direction], ...]")

    p = add("compare", cmd_compare, "compare lengths of the same words on two surfaces",
            default_format="csv")
    p.add_argument("surface", help=surf)
    p.add_argument("other", help="second surface")
    p.add_argument("words")

    p = add("density", cmd_density, "grid coverage of one long geodesic",
            parents=(common, start))
    p.add_argument("surface", help=surf)
    p.add_argument("--max-length", type=_positive(float), default=1e4)
    p.add_argument("--grid", type=_positive(int), default=32)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    w = Writer(args.format or args.default_format, buf)
    try:
        code = args.func(args, w)
    except (InputError, SurfaceError, OpenLoop, WordInvalidOnB, FileNotFoundError) as exc:
        print(f"flatcone: error: {exc}", file=sys.stderr)
        return 2
    except FlatConeError as exc:
        print(f"flatcone: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
