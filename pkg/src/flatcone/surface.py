"""Flat cone surfaces presented as Euclidean polygons with edge gluings.

A gluing maps its source edge onto its target edge by ``z -> R(rotation) z
+ translation``, reversing boundary orientation: the start vertex of the
source edge lands on the end vertex of the target edge. Rotations are exact
rational multiples of pi, which keeps cone angles and holonomy decidable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    ChartError,
    CurvatureError,
    Disconnected,
    EdgeLengthMismatch,
    GaussBonnetViolation,
    InexactAngle,
    NonClosed,
    NonOrientable,
    OrientationError,
    SurfaceError,
)
from .rational import EPS_ANGLE, RotationClass, pi_fraction, pi_text

EPS_GEOM = 1e-9
TWO_PI = 2.0 * math.pi


class PlanePoint(NamedTuple):
    x: float
    y: float


class EdgeRef(NamedTuple):
    chart: int
    edge: int


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _segments_cross(p, q, r, s) -> bool:
    """Closed segments pq and rs share a point."""
    def orient(a, b, c):
        v = _cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1])
        return 0 if abs(v) < 1e-15 else (1 if v > 0 else -1)

    def on_seg(a, b, c):
        return (min(a[0], b[0]) - 1e-15 <= c[0] <= max(a[0], b[0]) + 1e-15
                and min(a[1], b[1]) - 1e-15 <= c[1] <= max(a[1], b[1]) + 1e-15)

    o1, o2, o3, o4 = orient(p, q, r), orient(p, q, s), orient(r, s, p), orient(r, s, q)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and on_seg(p, q, r)) or (o2 == 0 and on_seg(p, q, s))
            or (o3 == 0 and on_seg(r, s, p)) or (o4 == 0 and on_seg(r, s, q)))


@dataclass(frozen=True)
class PolygonChart:
    """A simple polygon with counterclockwise vertices."""

    id: int
    vertices: tuple[PlanePoint, ...]

    def __post_init__(self):
        verts = tuple(PlanePoint(float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        self._validate()

    def _validate(self):
        n = len(self.vertices)
        if n < 3:
            raise ChartError(f"chart {self.id}: needs at least 3 vertices")
        for v in self.vertices:
            if not (math.isfinite(v.x) and math.isfinite(v.y)):
                raise ChartError(f"chart {self.id}: non-finite coordinate")
        for i in range(n):
            a, b = self.edge(i)
            if math.hypot(b.x - a.x, b.y - a.y) <= EPS_GEOM:
                raise ChartError(f"chart {self.id}: degenerate edge {i}")
        area = self.signed_area
        if area <= 0:
            raise ChartError(f"chart {self.id}: vertices must be counterclockwise "
                             f"with positive area (signed area {area})")
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_cross(*self.edge(i), *self.edge(j)):
                    raise ChartError(f"chart {self.id}: edges {i} and {j} intersect")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> tuple[PlanePoint, PlanePoint]:
        return self.vertices[i % self.n], self.vertices[(i + 1) % self.n]

    def edge_length(self, i: int) -> float:
        a, b = self.edge(i)
        return math.hypot(b.x - a.x, b.y - a.y)

    def edge_angle(self, i: int) -> float:
        """Direction of edge ``i`` in [0, 2pi)."""
        a, b = self.edge(i)
        return math.atan2(b.y - a.y, b.x - a.x) % TWO_PI

    @property
    def signed_area(self) -> float:
        s = 0.0
        for i in range(self.n):
            a, b = self.edge(i)
            s += a.x * b.y - b.x * a.y
        return 0.5 * s

    def interior_angle(self, k: int) -> float:
        """Interior angle at vertex ``k``, counterclockwise from edge k to edge k-1 reversed."""
        out = self.edge_angle(k)
        back = (self.edge_angle(k - 1) + math.pi) % TWO_PI
        ang = (back - out) % TWO_PI
        if ang < EPS_ANGLE:
            ang += TWO_PI  # hairpin; polygon validation rules this out
        return ang

    def contains(self, p: Sequence[float]) -> bool:
        """Point strictly inside (even-odd rule)."""
        x, y = p
        inside = False
        for i in range(self.n):
            a, b = self.edge(i)
            if (a.y > y) != (b.y > y):
                xi = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y)
                if xi > x:
                    inside = not inside
        return inside

    def interior_point(self) -> PlanePoint:
        """Some point strictly inside the polygon."""
        cx = sum(v.x for v in self.vertices) / self.n
        cy = sum(v.y for v in self.vertices) / self.n
        if self.contains((cx, cy)):
            return PlanePoint(cx, cy)
        # nonconvex: centroid of an ear
        for k in range(self.n):
            a, v, b = self.vertices[k - 1], self.vertices[k], self.vertices[(k + 1) % self.n]
            p = PlanePoint((a.x + v.x + b.x) / 3, (a.y + v.y + b.y) / 3)
            if self.contains(p):
                return p
        raise ChartError(f"chart {self.id}: could not find an interior point")


@dataclass(frozen=True)
class EdgeGluing:
    source: EdgeRef
    target: EdgeRef
    rotation: RotationClass
    translation: PlanePoint

    def apply(self, p: Sequence[float]) -> PlanePoint:
        c, s = self.rotation.cos_sin()
        return PlanePoint(c * p[0] - s * p[1] + self.translation.x,
                          s * p[0] + c * p[1] + self.translation.y)

    def inverse(self) -> EdgeGluing:
        inv = -self.rotation
        c, s = inv.cos_sin()
        tx, ty = self.translation
        return EdgeGluing(self.target, self.source, inv,
                          PlanePoint(-(c * tx - s * ty), -(s * tx + c * ty)))


@dataclass(frozen=True)
class SideMap:
    """Chart transition used when leaving ``edge``'s chart through ``edge``."""

    edge: EdgeRef
    partner: EdgeRef
    rotation: RotationClass
    cos: float
    sin: float
    tx: float
    ty: float
    gluing: EdgeGluing
    forward: bool

    def point(self, p: Sequence[float]) -> PlanePoint:
        return PlanePoint(self.cos * p[0] - self.sin * p[1] + self.tx,
                          self.sin * p[0] + self.cos * p[1] + self.ty)

    def vector(self, v: Sequence[float]) -> PlanePoint:
        return PlanePoint(self.cos * v[0] - self.sin * v[1],
                          self.sin * v[0] + self.cos * v[1])


@dataclass(frozen=True)
class ConePoint:
    """A vertex class with its total angle.

    ``angle_pi`` is the exact angle divided by pi when every corner angle is
    a recognisable rational multiple of pi, else None.
    """

    id: int
    vertex_class: tuple[tuple[int, int], ...]
    angle_pi: Fraction | None
    angle: float

    @property
    def exact(self) -> bool:
        return self.angle_pi is not None

    @property
    def is_singular(self) -> bool:
        if self.angle_pi is not None:
            return self.angle_pi != 2
        return abs(self.angle - TWO_PI) > EPS_ANGLE


@dataclass
class ConeFan:
    """Corners around one vertex class in counterclockwise order.

    A ray leaving the vertex has a cone coordinate ``psi`` in [0, theta).
    Corner ``i`` owns ``[starts[i], starts[i] + angles[i])``; inside it the
    ray's direction in the corner's chart is ``out_angles[i] + psi - starts[i]``.
    ``frames[i]`` is the exact chart-frame rotation from corner 0 to corner i.
    """

    class_id: int
    corners: list[tuple[int, int]]
    angles: list[float]
    starts: list[float]
    out_angles: list[float]
    frames: list[RotationClass]
    theta: float
    index: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {c: i for i, c in enumerate(self.corners)}

    def psi(self, corner: tuple[int, int], local_angle: float,
            tol: float = 1e-7) -> float:
        """Cone coordinate of a ray leaving the vertex at ``local_angle`` in ``corner``."""
        i = self.index[corner]
        off = (local_angle - self.out_angles[i]) % TWO_PI
        if off > TWO_PI - tol:
            off = 0.0
        if off > self.angles[i] + tol:
            raise ValueError(f"direction {local_angle} points outside corner {corner}")
        return (self.starts[i] + min(off, self.angles[i])) % self.theta

    def locate(self, psi: float, tol: float = 1e-10) -> tuple[int, float]:
        """Corner index and local direction for cone coordinate ``psi``.

        Rays within ``tol`` of a corner boundary snap onto the boundary and
        are reported in the corner that starts there.
        """
        psi %= self.theta
        if psi > self.theta - tol:
            psi = 0.0
        n = len(self.corners)
        for i in range(n):
            end = self.starts[i] + self.angles[i]
            if psi < end - tol or i == n - 1:
                off = max(psi - self.starts[i], 0.0)
                if off < tol:
                    off = 0.0
                return i, (self.out_angles[i] + off) % TWO_PI
            if psi < end:
                return (i + 1) % n, self.out_angles[(i + 1) % n]
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class SurfaceOptions:
    keep_marked_points: bool = False
    allow_positive_curvature: bool = False
    eps_geom: float = EPS_GEOM
    eps_angle: float = EPS_ANGLE


class FlatConeSurface:
    """An immutable flat cone surface with derived topology and cone data.

    Build with :func:`build_surface`.
    """

    def __init__(self, charts, gluings, options, sides, vertex_classes,
                 fans, corner_class, corner_angles):
        self.charts: tuple[PolygonChart, ...] = tuple(charts)
        self.gluings: tuple[EdgeGluing, ...] = tuple(gluings)
        self.options: SurfaceOptions = options
        self._sides: dict[EdgeRef, SideMap] = sides
        self.vertex_classes: tuple[ConePoint, ...] = tuple(vertex_classes)
        self._fans: list[ConeFan] = fans
        self._corner_class: dict[tuple[int, int], int] = corner_class
        self._corner_angles: dict[tuple[int, int], tuple[Fraction | None, float]] = corner_angles
        self._chart_index = {c.id: i for i, c in enumerate(self.charts)}
        self.euler_characteristic = len(self.vertex_classes) - len(self.gluings) + len(self.charts)
        self.genus = (2 - self.euler_characteristic) // 2

    @property
    def cone_points(self) -> tuple[ConePoint, ...]:
        if self.options.keep_marked_points:
            return self.vertex_classes
        return tuple(p for p in self.vertex_classes if p.is_singular)

    @property
    def eps_geom(self) -> float:
        return self.options.eps_geom

    def chart(self, chart_id: int) -> PolygonChart:
        return self.charts[self._chart_index[chart_id]]

    def chart_position(self, chart_id: int) -> int:
        return self._chart_index[chart_id]

    def side(self, edge: EdgeRef | tuple[int, int]) -> SideMap:
        return self._sides[EdgeRef(*edge)]

    def class_of(self, chart_id: int, vertex: int) -> int:
        return self._corner_class[(chart_id, vertex % self.chart(chart_id).n)]

    def is_stop_vertex(self, class_id: int) -> bool:
        """Whether a traced geodesic ends on arrival at this vertex class."""
        p = self.vertex_classes[class_id]
        return p.is_singular or self.options.keep_marked_points

    def fan(self, class_id: int) -> ConeFan:
        return self._fans[class_id]

    def corner_angle(self, chart_id: int, vertex: int) -> tuple[Fraction | None, float]:
        return self._corner_angles[(chart_id, vertex)]

    @cached_property
    def triangulation(self):
        from .triangulation import triangulate
        return triangulate(self)

    @cached_property
    def kernel_tables(self):
        from .kernels import KernelTables
        return KernelTables.from_surface(self)

    def to_dict(self) -> dict:
        return surface_to_dict(self)

    def __repr__(self) -> str:
        return (f"FlatConeSurface(charts={len(self.charts)}, gluings={len(self.gluings)}, "
                f"chi={self.euler_characteristic}, genus={self.genus}, "
                f"cone_points={[str(_angle_text(p)) for p in self.cone_points]})")


def _angle_text(p: ConePoint) -> str:
    if p.angle_pi is None:
        return f"{p.angle:.12g}"
    return pi_text(p.angle_pi)


def _check_gluing(charts: Mapping[int, PolygonChart], g: EdgeGluing, eps: float) -> EdgeGluing:
    src, dst = charts[g.source.chart], charts[g.target.chart]
    a, b = src.edge(g.source.edge)
    c, d = dst.edge(g.target.edge)
    la, lb = src.edge_length(g.source.edge), dst.edge_length(g.target.edge)
    if abs(la - lb) > eps:
        raise EdgeLengthMismatch(f"gluing {tuple(g.source)} -> {tuple(g.target)}: "
                                 f"edge lengths {la!r} and {lb!r} differ")
    cs, sn = g.rotation.cos_sin()
    ex, ey = b.x - a.x, b.y - a.y
    rx, ry = cs * ex - sn * ey, sn * ex + cs * ey
    fx, fy = d.x - c.x, d.y - c.y
    if math.hypot(rx + fx, ry + fy) > eps:
        if math.hypot(rx - fx, ry - fy) <= eps:
            raise NonOrientable(f"gluing {tuple(g.source)} -> {tuple(g.target)} preserves "
                                "edge orientation; the glued surface would not be oriented")
        raise OrientationError(f"gluing {tuple(g.source)} -> {tuple(g.target)}: rotation "
                               f"{g.rotation} does not carry the source edge onto the "
                               "reversed target edge")
    expected = PlanePoint(d.x - (cs * a.x - sn * a.y), d.y - (sn * a.x + cs * a.y))
    if g.translation is None:
        return EdgeGluing(g.source, g.target, g.rotation, expected)
    if math.hypot(g.translation.x - expected.x, g.translation.y - expected.y) > eps:
        raise OrientationError(f"gluing {tuple(g.source)} -> {tuple(g.target)}: translation "
                               f"{tuple(g.translation)} does not map the edges onto each other")
    return g


def build_surface(charts: Iterable[PolygonChart], gluings: Iterable[EdgeGluing], *,
                  keep_marked_points: bool = False,
                  allow_positive_curvature: bool = False,
                  eps_geom: float = EPS_GEOM) -> FlatConeSurface:
    """Validate the gluing data and derive vertex classes, cone angles and topology.

    Raises a :class:`SurfaceError` subclass on malformed input.
    """
    options = SurfaceOptions(keep_marked_points, allow_positive_curvature, eps_geom)
    charts = list(charts)
    by_id: dict[int, PolygonChart] = {}
    for c in charts:
        if c.id in by_id:
            raise ChartError(f"duplicate chart id {c.id}")
        by_id[c.id] = c

    used: dict[EdgeRef, int] = {}
    checked: list[EdgeGluing] = []
    for gi, g in enumerate(gluings):
        g = EdgeGluing(EdgeRef(*g.source), EdgeRef(*g.target), RotationClass.of(g.rotation),
                       None if g.translation is None else PlanePoint(*g.translation))
        for ref in (g.source, g.target):
            if ref.chart not in by_id:
                raise SurfaceError(f"gluing {gi} references unknown chart {ref.chart}")
            if not 0 <= ref.edge < by_id[ref.chart].n:
                raise SurfaceError(f"gluing {gi} references edge {tuple(ref)} out of range")
            if ref in used:
                raise SurfaceError(f"edge {tuple(ref)} is glued more than once")
            used[ref] = gi
        if g.source == g.target:
            raise SurfaceError(f"edge {tuple(g.source)} is glued to itself")
        checked.append(_check_gluing(by_id, g, eps_geom))

    for c in charts:
        for i in range(c.n):
            if EdgeRef(c.id, i) not in used:
                raise NonClosed(f"edge {(c.id, i)} is not glued")

    sides: dict[EdgeRef, SideMap] = {}
    for g in checked:
        inv = g.inverse()
        for gl, fwd in ((g, True), (inv, False)):
            cs, sn = gl.rotation.cos_sin()
            sides[gl.source] = SideMap(gl.source, gl.target, gl.rotation, cs, sn,
                                       gl.translation.x, gl.translation.y, g, fwd)

    # connectivity of the dual graph
    adj: dict[int, set[int]] = {c.id: set() for c in charts}
    for g in checked:
        adj[g.source.chart].add(g.target.chart)
        adj[g.target.chart].add(g.source.chart)
    seen = {charts[0].id}
    stack = [charts[0].id]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(charts):
        raise Disconnected(f"charts {sorted(set(by_id) - seen)} are not connected to chart {charts[0].id}")

    corner_angles: dict[tuple[int, int], tuple[Fraction | None, float]] = {}
    for c in charts:
        for k in range(c.n):
            a = c.interior_angle(k)
            corner_angles[(c.id, k)] = (pi_fraction(a, options.eps_angle), a)

    # corner chasing, counterclockwise: leave corner (c, k) through edge k-1
    corner_class: dict[tuple[int, int], int] = {}
    classes: list[ConePoint] = []
    fans: list[ConeFan] = []
    for c in charts:
        for k in range(c.n):
            if (c.id, k) in corner_class:
                continue
            cid = len(classes)
            corners, frames = [], [RotationClass.zero()]
            cur = (c.id, k)
            while cur not in corner_class:
                corner_class[cur] = cid
                corners.append(cur)
                ch = by_id[cur[0]]
                side = sides[EdgeRef(cur[0], (cur[1] - 1) % ch.n)]
                cur = (side.partner.chart, side.partner.edge)
                frames.append(frames[-1] + side.rotation)
            if cur != corners[0]:
                raise SurfaceError(f"corner cycle through {corners[0]} does not close")
            frames.pop()
            angs = [corner_angles[x][1] for x in corners]
            fracs = [corner_angles[x][0] for x in corners]
            exact = all(f is not None for f in fracs)
            starts, acc, acc_f = [], 0.0, Fraction(0)
            for f, a in zip(fracs, angs):
                starts.append(float(acc_f) * math.pi if exact else acc)
                acc += a
                if exact:
                    acc_f += f
            theta_pi = acc_f if exact else None
            theta = float(acc_f) * math.pi if exact else acc
            if exact:
                angs = [float(f) * math.pi for f in fracs]
            outs = [by_id[ch].edge_angle(v) for ch, v in corners]
            classes.append(ConePoint(cid, tuple(corners), theta_pi, theta))
            fans.append(ConeFan(cid, corners, angs, starts, outs, frames, theta))

    V, E, F = len(classes), len(checked), len(charts)
    chi = V - E + F
    if all(p.exact for p in classes):
        lhs = sum(2 - p.angle_pi for p in classes)
        if lhs != 2 * chi:
            raise GaussBonnetViolation(f"sum of (2pi - theta) is {lhs}pi but 2pi*chi is {2 * chi}pi")
    else:
        lhs = sum(TWO_PI - p.angle for p in classes)
        if abs(lhs - TWO_PI * chi) > options.eps_angle * (1 + sum(c.n for c in charts)):
            raise GaussBonnetViolation(f"sum of (2pi - theta) is {lhs} but 2pi*chi is {TWO_PI * chi}")

    if not allow_positive_curvature:
        for p in classes:
            small = p.angle_pi < 2 if p.exact else p.angle < TWO_PI - options.eps_angle
            if small:
                raise CurvatureError(f"vertex class {p.id} has cone angle {_angle_text(p)} < 2pi")

    return FlatConeSurface(charts, checked, options, sides, classes, fans,
                           corner_class, corner_angles)


def cone_angles(surface: FlatConeSurface) -> list[tuple[ConePoint, Fraction | float]]:
    """Vertex classes with angle different from 2pi, paired with the angle.

    The angle is a Fraction (multiple of pi) when exact, else radians.
    """
    return [(p, p.angle_pi if p.exact else p.angle)
            for p in surface.vertex_classes if p.is_singular]


@dataclass(frozen=True)
class AngleDecision:
    holds: bool
    witnesses: tuple[tuple[ConePoint, Fraction | float], ...]
    approximate: bool = False

    def __bool__(self) -> bool:
        return self.holds


def angle_condition(surface: FlatConeSurface, strict: bool = False) -> AngleDecision:
    """Every cone angle is k*pi with integer k >= 3.

    Inexact angles fall back to a tolerance test and mark the decision
    approximate; with ``strict=True`` they raise :class:`InexactAngle`.
    """
    witnesses = []
    approximate = False
    for p, ang in cone_angles(surface):
        if p.exact:
            ok = ang.denominator == 1 and ang >= 3
        else:
            if strict:
                raise InexactAngle(f"cone point {p.id} angle {p.angle!r} is not a "
                                   "recognisable rational multiple of pi")
            approximate = True
            k = round(p.angle / math.pi)
            ok = k >= 3 and abs(p.angle - k * math.pi) <= surface.options.eps_angle
        if not ok:
            witnesses.append((p, ang))
    return AngleDecision(not witnesses, tuple(witnesses), approximate)


def euler_characteristic(surface: FlatConeSurface) -> int:
    return surface.euler_characteristic


def genus(surface: FlatConeSurface) -> int:
    return surface.genus


# -- serialisation -----------------------------------------------------------

def surface_from_dict(data: Mapping, **kwargs) -> FlatConeSurface:
    try:
        charts = [PolygonChart(int(p["id"]), tuple(PlanePoint(*map(float, v)) for v in p["vertices"]))
                  for p in data["polygons"]]
        gluings = []
        for g in data["gluings"]:
            rot = g.get("rotation_pi", [0, 1])
            tr = g.get("translation")
            gluings.append(EdgeGluing(EdgeRef(*map(int, g["from"])), EdgeRef(*map(int, g["to"])),
                                      RotationClass.of(tuple(rot)),
                                      None if tr is None else PlanePoint(*map(float, tr))))
    except SurfaceError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SurfaceError(f"malformed surface description: {exc!r}") from exc
    return build_surface(charts, gluings, **kwargs)


def surface_to_dict(surface: FlatConeSurface) -> dict:
    return {
        "polygons": [{"id": c.id, "vertices": [[v.x, v.y] for v in c.vertices]}
                     for c in surface.charts],
        "gluings": [{"from": list(g.source), "to": list(g.target),
                     "rotation_pi": g.rotation.to_json(),
                     "translation": [g.translation.x, g.translation.y]}
                    for g in surface.gluings],
    }


def load_surface(path: str | Path, **kwargs) -> FlatConeSurface:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SurfaceError(f"{path}: not valid JSON ({exc})") from exc
    return surface_from_dict(data, **kwargs)


def dumps_surface(surface: FlatConeSurface) -> str:
    """JSON text with one polygon or gluing per line."""
    d = surface_to_dict(surface)
    polys = ",\n".join("  " + json.dumps(p) for p in d["polygons"])
    glus = ",\n".join("  " + json.dumps(g) for g in d["gluings"])
    return '{\n "polygons": [\n' + polys + '\n ],\n "gluings": [\n' + glus + "\n ]\n}\n"


def dump_surface(surface: FlatConeSurface, path: str | Path) -> None:
    Path(path).write_text(dumps_surface(surface), encoding="utf-8")


def scaled(surface: FlatConeSurface, factor: float) -> FlatConeSurface:
    """Copy of ``surface`` with every coordinate multiplied by ``factor``."""
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    charts = [PolygonChart(c.id, tuple(PlanePoint(v.x * factor, v.y * factor) for v in c.vertices))
              for c in surface.charts]
    gluings = [EdgeGluing(g.source, g.target, g.rotation, None) for g in surface.gluings]
    o = surface.options
    return build_surface(charts, gluings, keep_marked_points=o.keep_marked_points,
                         allow_positive_curvature=o.allow_positive_curvature,
                         eps_geom=o.eps_geom)


def relabeled(surface: FlatConeSurface, mapping: Mapping[int, int],
              reverse_gluings: bool = False) -> FlatConeSurface:
    """Copy with chart ids renamed; optionally reverse gluing order and direction."""
    charts = [PolygonChart(mapping[c.id], c.vertices) for c in surface.charts]
    gluings = []
    for g in surface.gluings:
        if reverse_gluings:
            g = g.inverse()
        gluings.append(EdgeGluing(EdgeRef(mapping[g.source.chart], g.source.edge),
                                  EdgeRef(mapping[g.target.chart], g.target.edge),
                                  g.rotation, g.translation))
    if reverse_gluings:
        gluings.reverse()
    o = surface.options
    return build_surface(charts, gluings, keep_marked_points=o.keep_marked_points,
                         allow_positive_curvature=o.allow_positive_curvature,
                         eps_geom=o.eps_geom)
