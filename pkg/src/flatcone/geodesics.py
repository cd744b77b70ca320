"""Straight-line geodesics on a flat cone surface.

A geodesic is traced chart by chart: inside a polygon it is a straight
segment, and on leaving through an edge the edge's side map carries the
point and direction into the neighbouring chart. Arrival at a singular
vertex (or a retained marked point) ends the trace; a flat unmarked vertex
is passed straight through.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from . import kernels
from .errors import NumericalStall
from .rational import RotationClass
from .surface import EdgeGluing, EdgeRef, FlatConeSurface, PlanePoint

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DirectedPoint:
    """A point of a chart with a unit direction, given as an angle in [0, 2pi).

    When ``position`` is a polygon vertex the direction is measured in that
    corner: counterclockwise from the outgoing edge, continuing into the
    neighbouring corners of the cone if it leaves the polygon.
    """

    chart: int
    position: PlanePoint
    direction: float

    def __post_init__(self):
        object.__setattr__(self, "position", PlanePoint(*map(float, self.position)))
        object.__setattr__(self, "direction", float(self.direction) % TWO_PI)

    @property
    def vector(self) -> tuple[float, float]:
        return math.cos(self.direction), math.sin(self.direction)

    def reversed(self) -> DirectedPoint:
        return DirectedPoint(self.chart, self.position, self.direction + math.pi)


@dataclass(frozen=True)
class CrossingEvent:
    edge: EdgeRef
    exit_point: PlanePoint
    applied_gluing: EdgeGluing


@dataclass(frozen=True)
class VertexPassage:
    """Straight passage through a flat, unmarked vertex."""

    vertex_class: int
    arrival: tuple[int, int]     # (chart, vertex) corner the path came in through
    departure: tuple[int, int]
    rotation: RotationClass      # frame change from arrival chart to departure chart


@dataclass(frozen=True)
class Segment:
    chart: int
    start: PlanePoint
    end: PlanePoint

    @property
    def length(self) -> float:
        return math.hypot(self.end.x - self.start.x, self.end.y - self.start.y)


class LengthReached:
    def __repr__(self):
        return "LengthReached()"

    def __eq__(self, other):
        return isinstance(other, LengthReached)

    def __hash__(self):
        return hash(LengthReached)


@dataclass(frozen=True)
class ConePointHit:
    """Arrival at a stopping vertex class.

    ``arrival_direction`` is the travel direction in ``chart``;
    ``psi`` is the cone coordinate of the ray pointing back along the path.
    """

    cone_point: int
    chart: int
    vertex: int
    position: PlanePoint
    arrival_direction: float
    psi: float


Terminal = Union[LengthReached, ConePointHit]


@dataclass
class GeodesicPath:
    start: DirectedPoint
    segments: list[Segment]
    crossings: list[CrossingEvent]
    passages: list[VertexPassage]
    length: float
    terminal: Terminal
    end: DirectedPoint
    rotation: RotationClass = field(default_factory=RotationClass.zero)

    @property
    def hit_cone(self) -> bool:
        return isinstance(self.terminal, ConePointHit)


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @classmethod
    def parse(cls, value) -> Side:
        if isinstance(value, Side):
            return value
        v = str(value).strip().upper()
        if v in ("L", "LEFT"):
            return cls.LEFT
        if v in ("R", "RIGHT"):
            return cls.RIGHT
        raise ValueError(f"side must be Left or Right, got {value!r}")


@dataclass(frozen=True)
class ConePointContinuation:
    """Turning at a cone point by exactly pi on one side.

    Angles are cone coordinates: ``arrival_direction`` is the ray back along
    the incoming path, ``departure_direction`` the outgoing ray.
    """

    cone_point: int
    arrival_direction: float
    side: Side
    departure_direction: float
    departure: DirectedPoint


# -- helpers -----------------------------------------------------------------

def _applied_gluings(surface: FlatConeSurface) -> dict[EdgeRef, EdgeGluing]:
    cache = surface.__dict__.get("_applied_gluings")
    if cache is None:
        cache = {}
        for g in surface.gluings:
            cache[g.source] = g
            cache[g.target] = g.inverse()
        surface.__dict__["_applied_gluings"] = cache
    return cache


def _corner_psi(surface: FlatConeSurface, chart_id: int, vertex: int, direction: float) -> tuple[int, float]:
    """Class id and cone coordinate of a ray leaving corner (chart, vertex)."""
    cls = surface.class_of(chart_id, vertex)
    fan = surface.fan(cls)
    i = fan.index[(chart_id, vertex)]
    off = (direction - fan.out_angles[i]) % TWO_PI
    if off > TWO_PI - 1e-12:
        off = 0.0
    return cls, (fan.starts[i] + off) % fan.theta


def _vertex_at(surface: FlatConeSurface, chart_id: int, p, eps: float) -> int | None:
    for k, v in enumerate(surface.chart(chart_id).vertices):
        if math.hypot(p[0] - v.x, p[1] - v.y) < eps:
            return k
    return None


def _edge_at(surface: FlatConeSurface, chart_id: int, p, eps: float) -> int | None:
    chart = surface.chart(chart_id)
    for k in range(chart.n):
        a, b = chart.edge(k)
        ex, ey = b.x - a.x, b.y - a.y
        L2 = ex * ex + ey * ey
        t = ((p[0] - a.x) * ex + (p[1] - a.y) * ey) / L2
        if -1e-12 <= t <= 1 + 1e-12:
            d = abs((p[0] - a.x) * ey - (p[1] - a.y) * ex) / math.sqrt(L2)
            if d < eps:
                return k
    return None


@dataclass
class _State:
    chart: int          # chart position index
    x: float
    y: float
    dx: float
    dy: float
    excl_a: int = -1
    excl_b: int = -1
    rotation: RotationClass = field(default_factory=RotationClass.zero)


def _leave_vertex(surface: FlatConeSurface, cls: int, psi: float) -> tuple[_State, tuple[int, int]]:
    fan = surface.fan(cls)
    i, local = fan.locate(psi)
    ch, k = fan.corners[i]
    pos = surface.chart_position(ch)
    tables = surface.kernel_tables
    base = int(tables.offsets[pos])
    n = surface.charts[pos].n
    v = surface.charts[pos].vertices[k]
    st = _State(pos, v.x, v.y, math.cos(local), math.sin(local),
                base + (k - 1) % n, base + k)
    return st, (ch, k)


def _initial_state(surface: FlatConeSurface, start: DirectedPoint, eps: float) -> _State:
    pos = surface.chart_position(start.chart)
    p = start.position
    k = _vertex_at(surface, start.chart, p, eps)
    if k is not None:
        cls, psi = _corner_psi(surface, start.chart, k, start.direction)
        st, corner = _leave_vertex(surface, cls, psi)
        fan = surface.fan(cls)
        st.rotation = fan.frames[fan.index[corner]] - fan.frames[fan.index[(start.chart, k)]]
        return st
    dx, dy = start.vector
    e = _edge_at(surface, start.chart, p, eps)
    base = int(surface.kernel_tables.offsets[pos])
    if e is None:
        return _State(pos, p.x, p.y, dx, dy)
    a, b = surface.chart(start.chart).edge(e)
    ex, ey = b.x - a.x, b.y - a.y
    inward = ex * dy - ey * dx   # > 0 when pointing into the polygon
    if inward >= -1e-12 * math.hypot(ex, ey):
        return _State(pos, p.x, p.y, dx, dy, base + e)
    side = surface.side((start.chart, e))
    q = side.point(p)
    v = side.vector((dx, dy))
    npos = surface.chart_position(side.partner.chart)
    nbase = int(surface.kernel_tables.offsets[npos])
    return _State(npos, q.x, q.y, v.x, v.y, nbase + side.partner.edge, -1, side.rotation)


# -- tracing -----------------------------------------------------------------

def trace(surface: FlatConeSurface, start: DirectedPoint, max_length: float, *,
          backend: str | None = None) -> GeodesicPath:
    """Follow the geodesic from ``start`` for ``max_length`` or until it hits a cone point.

    Raises NumericalStall when a step makes less than ``eps_geom * 1e-3``
    progress, which happens only for grazing or corner pathologies.
    """
    if max_length < 0 or not math.isfinite(max_length):
        raise ValueError("max_length must be finite and non-negative")
    eps = surface.eps_geom
    stall = eps * 1e-3
    tables = surface.kernel_tables
    offsets = tables.offsets
    glue = _applied_gluings(surface)
    st = _initial_state(surface, start, eps)
    rotation = st.rotation
    segments: list[Segment] = []
    crossings: list[CrossingEvent] = []
    passages: list[VertexPassage] = []
    remaining = float(max_length)
    terminal: Terminal = LengthReached()
    chart, x, y, dx, dy = st.chart, st.x, st.y, st.dx, st.dy
    excl_a, excl_b = st.excl_a, st.excl_b
    if remaining == 0.0:
        end = DirectedPoint(surface.charts[chart].id, (x, y), math.atan2(dy, dx))
        return GeodesicPath(start, [], [], [], 0.0, terminal, end, rotation)

    while True:
        (status, edges, xs, ys, nchart, nx, ny, ndx, ndy, nrem, extra) = kernels.trace_run(
            tables, chart, x, y, dx, dy, remaining, excl_a, excl_b, eps, stall, backend=backend)
        # segments and crossings of this run
        cx, cy, cc = x, y, chart
        for g, px, py in zip(edges, xs, ys):
            ref = tables.edge_ref[g]
            segments.append(Segment(surface.charts[cc].id, PlanePoint(cx, cy), PlanePoint(px, py)))
            gl = glue[ref]
            crossings.append(CrossingEvent(ref, PlanePoint(px, py), gl))
            rotation = rotation + gl.rotation
            side = surface.side(ref)
            q = side.point((px, py))
            cx, cy = q.x, q.y
            cc = surface.chart_position(side.partner.chart)
        if status == kernels.FULL:
            chart, x, y, dx, dy, remaining = nchart, nx, ny, ndx, ndy, nrem
            excl_a, excl_b = extra, -1
            continue
        if status in (kernels.STALL, kernels.NOEXIT):
            raise NumericalStall(
                f"geodesic stalled in chart {surface.charts[nchart].id} at ({nx:.17g}, {ny:.17g}) "
                f"after length {max_length - nrem:.6g}")
        segments.append(Segment(surface.charts[nchart].id, PlanePoint(cx, cy), PlanePoint(nx, ny)))
        remaining = nrem
        if status == kernels.LENGTH:
            end = DirectedPoint(surface.charts[nchart].id, (nx, ny), math.atan2(ndy, ndx))
            break
        # VERTEX
        cid = surface.charts[nchart].id
        k = extra - int(offsets[nchart])
        vtx = surface.charts[nchart].vertices[k]
        arrival = math.atan2(ndy, ndx) % TWO_PI
        cls = surface.class_of(cid, k)
        fan = surface.fan(cls)
        psi_in = fan.psi((cid, k), arrival + math.pi)
        if surface.is_stop_vertex(cls) or remaining <= 0.0:
            terminal = ConePointHit(cls, cid, k, vtx, arrival, psi_in)
            end = DirectedPoint(cid, vtx, arrival)
            if remaining <= 0.0 and not surface.is_stop_vertex(cls):
                terminal = LengthReached()
            break
        st, corner = _leave_vertex(surface, cls, psi_in + math.pi)
        turn = fan.frames[fan.index[corner]] - fan.frames[fan.index[(cid, k)]]
        rotation = rotation + turn
        passages.append(VertexPassage(cls, (cid, k), corner, turn))
        chart, x, y, dx, dy = st.chart, st.x, st.y, st.dx, st.dy
        excl_a, excl_b = st.excl_a, st.excl_b
    length = max(0.0, max_length - remaining)
    return GeodesicPath(start, segments, crossings, passages, length, terminal, end, rotation)


def trace_from_cone(surface: FlatConeSurface, cone_point: int, psi: float,
                    max_length: float, *, backend: str | None = None) -> GeodesicPath:
    """Trace the ray leaving vertex class ``cone_point`` at cone coordinate ``psi``."""
    fan = surface.fan(cone_point)
    i, local = fan.locate(psi)
    ch, k = fan.corners[i]
    start = DirectedPoint(ch, surface.chart(ch).vertices[k], local)
    return trace(surface, start, max_length, backend=backend)


def reverse_trace(surface: FlatConeSurface, path: GeodesicPath, *,
                  backend: str | None = None) -> GeodesicPath:
    """Trace back from the end of ``path`` with the direction reversed."""
    return trace(surface, path.end.reversed(), path.length, backend=backend)


# -- cone points -------------------------------------------------------------

def continuation(surface: FlatConeSurface, hit: ConePointHit, side: Side | str) -> ConePointContinuation:
    """The departure making angle exactly pi with the arrival on ``side``.

    Left is the side counterclockwise from the arrival direction: the pi
    angle lies to the traveller's left, so the departure ray sits at cone
    coordinate ``psi - pi``. Right uses ``psi + pi``.
    """
    side = Side.parse(side)
    fan = surface.fan(hit.cone_point)
    psi_out = (hit.psi - math.pi if side is Side.LEFT else hit.psi + math.pi) % fan.theta
    i, local = fan.locate(psi_out)
    ch, k = fan.corners[i]
    dep = DirectedPoint(ch, surface.chart(ch).vertices[k], local)
    return ConePointContinuation(hit.cone_point, hit.psi, side, psi_out, dep)


def continue_at_cone_point(surface: FlatConeSurface, hit: ConePointHit,
                           side: Side | str) -> DirectedPoint:
    return continuation(surface, hit, side).departure


@dataclass
class LimitPath:
    """Geodesic legs joined at cone points, each turning by pi on a recorded side."""

    legs: list[GeodesicPath]
    continuations: list[ConePointContinuation]

    @property
    def sides(self) -> list[Side]:
        return [c.side for c in self.continuations]

    @property
    def length(self) -> float:
        return sum(p.length for p in self.legs)


def trace_through_cones(surface: FlatConeSurface, start: DirectedPoint, max_length: float,
                        sides: Iterable[Side | str], *, backend: str | None = None) -> LimitPath:
    """Trace, turning at each cone point hit by the next side in ``sides``.

    Stops when the length is used up or the side list runs out.
    """
    side_iter = iter(sides)
    legs, conts = [], []
    remaining = max_length
    cur = start
    while True:
        leg = trace(surface, cur, remaining, backend=backend)
        legs.append(leg)
        remaining -= leg.length
        if not leg.hit_cone or remaining <= 0:
            break
        try:
            s = next(side_iter)
        except StopIteration:
            break
        c = continuation(surface, leg.terminal, s)
        conts.append(c)
        cur = c.departure
    return LimitPath(legs, conts)


def is_admissible_limit_path(path: LimitPath | Sequence[Side | str]) -> bool:
    """At most one switch between Left and Right along the path."""
    sides = path.sides if isinstance(path, LimitPath) else [Side.parse(s) for s in path]
    switches = sum(1 for a, b in zip(sides, sides[1:]) if a is not b)
    return switches <= 1


# -- density -----------------------------------------------------------------

def _clip_area(poly, x0, y0, x1, y1) -> float:
    """Area of ``poly`` clipped to the axis-aligned box (Sutherland-Hodgman)."""
    pts = list(poly)
    for axis, bound, keep_ge in ((0, x0, True), (0, x1, False), (1, y0, True), (1, y1, False)):
        if not pts:
            return 0.0
        out = []
        for i in range(len(pts)):
            p, q = pts[i - 1], pts[i]
            pin = p[axis] >= bound if keep_ge else p[axis] <= bound
            qin = q[axis] >= bound if keep_ge else q[axis] <= bound
            if qin:
                if not pin:
                    out.append(_cut(p, q, axis, bound))
                out.append(q)
            elif pin:
                out.append(_cut(p, q, axis, bound))
        pts = out
    area = 0.0
    for i in range(len(pts)):
        (ax, ay), (bx, by) = pts[i - 1], pts[i]
        area += ax * by - bx * ay
    return abs(area) / 2


def _cut(p, q, axis, bound):
    t = (bound - p[axis]) / (q[axis] - p[axis])
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


@dataclass(frozen=True)
class DensityProfile:
    coverage: float
    entered: int
    cells: int
    length: float


def density_profile(surface: FlatConeSurface, start: DirectedPoint, total_length: float,
                    grid_resolution: int, *, backend: str | None = None) -> DensityProfile:
    """Fraction of grid cells entered by the geodesic.

    Each chart's bounding box gets a ``grid_resolution`` square grid; only
    cells meeting the polygon in positive area count.
    """
    import numpy as np

    if grid_resolution < 1:
        raise ValueError("grid_resolution must be positive")
    path = trace(surface, start, total_length, backend=backend)
    n = grid_resolution
    geom = {}
    valid = np.zeros(len(surface.charts) * n * n, dtype=bool)
    for pos, c in enumerate(surface.charts):
        xs = [v.x for v in c.vertices]
        ys = [v.y for v in c.vertices]
        ox, oy = min(xs), min(ys)
        cw, chh = (max(xs) - ox) / n, (max(ys) - oy) / n
        geom[c.id] = (ox, oy, cw, chh, pos * n * n)
        tol = 1e-12 * cw * chh
        for iy in range(n):
            for ix in range(n):
                a = _clip_area(c.vertices, ox + ix * cw, oy + iy * chh,
                               ox + (ix + 1) * cw, oy + (iy + 1) * chh)
                valid[pos * n * n + iy * n + ix] = a > tol
    mask = np.zeros(len(surface.charts) * n * n, dtype=np.uint8)
    for s in path.segments:
        ox, oy, cw, chh, base = geom[s.chart]
        kernels.mark_segment(s.start.x, s.start.y, s.end.x, s.end.y, ox, oy, cw, chh,
                             n, n, mask, base, backend=backend)
    entered = int(np.count_nonzero(mask.astype(bool) & valid))
    cells = int(np.count_nonzero(valid))
    return DensityProfile(entered / cells, entered, cells, path.length)
