"""Regenerate the bundled example surfaces in src/flatcone/fixtures/."""

import math
from fractions import Fraction
from pathlib import Path

from flatcone.rational import RotationClass, pi_fraction
from flatcone.surface import EdgeGluing, EdgeRef, PlanePoint, PolygonChart, build_surface, dump_surface

OUT = Path(__file__).resolve().parents[1] / "src" / "flatcone" / "fixtures"


def pairs_to_gluings(charts, pairs):
    by_id = {c.id: c for c in charts}
    gluings = []
    for (ca, ea), (cb, eb) in pairs:
        da = by_id[ca].edge_angle(ea)
        db = by_id[cb].edge_angle(eb)
        rho = pi_fraction((db - da + math.pi) % (2 * math.pi)) % 2
        gluings.append(EdgeGluing(EdgeRef(ca, ea), EdgeRef(cb, eb), RotationClass.of(rho), None))
    return gluings


def square(cid, x0=0.0, y0=0.0, s=1.0):
    return PolygonChart(cid, ((x0, y0), (x0 + s, y0), (x0 + s, y0 + s), (x0, y0 + s)))


def torus():
    return [square(0)], pairs_to_gluings([square(0)], [((0, 1), (0, 3)), ((0, 2), (0, 0))])


def octagon():
    r = 0.5 / math.sin(math.pi / 8)
    verts = [(r * math.cos((2 * k - 5) * math.pi / 8), r * math.sin((2 * k - 5) * math.pi / 8))
             for k in range(8)]
    charts = [PolygonChart(0, verts)]
    return charts, pairs_to_gluings(charts, [((0, i), (0, i + 4)) for i in range(4)])


def l_shape():
    a, b, c = square(0, 0, 0), square(1, 1, 0), square(2, 0, 1)
    pairs = [((0, 1), (1, 3)), ((0, 2), (2, 0)), ((1, 0), (1, 2)),
             ((1, 1), (0, 3)), ((2, 1), (2, 3)), ((2, 2), (0, 0))]
    return [a, b, c], pairs_to_gluings([a, b, c], pairs)


def halftrans():
    ell = PolygonChart(0, ((0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2), (0, 1)))
    dom = PolygonChart(1, ((3, 0), (4, 0), (5, 0), (5, 1), (4, 1), (3, 1)))
    pairs = [((0, 0), (0, 5)), ((0, 1), (0, 3)), ((0, 2), (0, 4)), ((0, 6), (1, 2)),
             ((0, 7), (1, 5)), ((1, 0), (1, 3)), ((1, 1), (1, 4))]
    return [ell, dom], pairs_to_gluings([ell, dom], pairs)


def badangle():
    h = math.sqrt(3) / 2
    trap = [(0, 0), (1, 0), (2, 0), (1.5, h), (0.5, h)]
    t0 = PolygonChart(0, trap)
    t1 = PolygonChart(1, [(x + 3, y) for x, y in trap])
    rh = PolygonChart(2, [(6, 0), (7, 0), (7.5, h), (6.5, h)])
    pairs = [((0, 0), (0, 2)), ((0, 1), (0, 3)), ((0, 4), (1, 1)), ((1, 0), (1, 2)),
             ((1, 3), (2, 0)), ((1, 4), (2, 2)), ((2, 1), (2, 3))]
    return [t0, t1, rh], pairs_to_gluings([t0, t1, rh], pairs)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for name, fn in [("torus", torus), ("octagon", octagon), ("l_shape", l_shape),
                     ("halftrans", halftrans), ("badangle", badangle)]:
        s = build_surface(*fn())
        dump_surface(s, OUT / f"{name}.json")
        print(name, s)
