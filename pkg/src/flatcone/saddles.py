"""Saddle-connection enumeration by unfolding triangle corridors.

From every corner of every stopping vertex class the surface is developed
into the plane one triangle at a time. Each corridor carries a visibility
wedge of directions from the cone point that can still reach the current
triangle. A vertex seen strictly inside the wedge ends a straight segment
from the cone point; if it is a cone point that segment is a saddle
connection, and in any case the wedge is split there. Corridors whose
visible part lies beyond the length bound are dropped.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import Explosion
from .geodesics import ConePointHit, DirectedPoint, trace
from .rational import RotationClass
from .surface import FlatConeSurface, PlanePoint

TWO_PI = 2.0 * math.pi
DEFAULT_CAP = 10**6
PSI_QUANTUM = 1e-8


@dataclass(frozen=True)
class SaddleConnection:
    """A geodesic segment between two stopping vertex classes.

    ``displacement`` is the developed vector in the departure chart,
    ``arrival`` the same segment's vector in the arrival chart; they differ
    by the corridor holonomy: ``arrival = R(holonomy) displacement``.
    ``psi_start`` and ``psi_end`` are the cone coordinates of the segment's
    two ends (each pointing into the segment).
    """

    start_cone: int
    end_cone: int
    displacement: PlanePoint
    length: float
    holonomy: RotationClass
    arrival: PlanePoint
    start_corner: tuple[int, int]
    end_corner: tuple[int, int]
    psi_start: float
    psi_end: float

    @property
    def direction(self) -> float:
        return math.atan2(self.displacement.y, self.displacement.x) % TWO_PI

    def reversed(self) -> SaddleConnection:
        return SaddleConnection(
            self.end_cone, self.start_cone,
            PlanePoint(-self.arrival.x, -self.arrival.y), self.length, -self.holonomy,
            PlanePoint(-self.displacement.x, -self.displacement.y),
            self.end_corner, self.start_corner, self.psi_end, self.psi_start)

    def to_record(self) -> dict:
        return {"start_cone": self.start_cone, "end_cone": self.end_cone,
                "dx": self.displacement.x, "dy": self.displacement.y, "length": self.length}


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _clip_distance(px, py, qx, qy, rx, ry, lx, ly) -> float | None:
    """Distance from the origin to the part of segment PQ inside the wedge (r, l)."""
    lo, hi = 0.0, 1.0
    ex, ey = qx - px, qy - py
    for a, b in ((_cross(rx, ry, px, py), _cross(rx, ry, ex, ey)),
                 (-_cross(lx, ly, px, py), -_cross(lx, ly, ex, ey))):
        # need a + b s >= 0
        if abs(b) < 1e-300:
            if a < -1e-12:
                return None
            continue
        s = -a / b
        if b > 0:
            lo = max(lo, s)
        else:
            hi = min(hi, s)
    if lo > hi + 1e-12:
        return None
    L2 = ex * ex + ey * ey
    s0 = -(px * ex + py * ey) / L2 if L2 > 0 else 0.0
    s0 = min(max(s0, lo), hi)
    return math.hypot(px + s0 * ex, py + s0 * ey)


class _Dedup:
    def __init__(self, surface: FlatConeSurface):
        self.surface = surface
        self.seen: set = set()

    def _q(self, cone: int, psi: float) -> tuple[int, int]:
        theta = self.surface.fan(cone).theta
        psi %= theta
        if psi > theta - PSI_QUANTUM:
            psi = 0.0
        return cone, round(psi / PSI_QUANTUM)

    def key(self, sc: SaddleConnection):
        a = self._q(sc.start_cone, sc.psi_start)
        b = self._q(sc.end_cone, sc.psi_end)
        return (a, b) if a <= b else (b, a)

    def add(self, sc: SaddleConnection) -> bool:
        (ca, qa), (cb, qb) = self.key(sc)
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                if ((ca, qa + da), (cb, qb + db)) in self.seen:
                    return False
        self.seen.add(((ca, qa), (cb, qb)))
        return True


def _canonical(sc: SaddleConnection, dedup: _Dedup) -> SaddleConnection:
    a = dedup._q(sc.start_cone, sc.psi_start)
    b = dedup._q(sc.end_cone, sc.psi_end)
    return sc if a <= b else sc.reversed()


def enumerate_saddle_connections(surface: FlatConeSurface, length_bound: float, *,
                                 cap: int = DEFAULT_CAP) -> list[SaddleConnection]:
    """All saddle connections of length at most ``length_bound``, each once up to reversal.

    Sorted by (length, direction angle). Raises Explosion when more than
    ``cap`` corridors would be developed.
    """
    if not length_bound > 0:
        raise ValueError("length_bound must be positive")
    tri = surface.triangulation
    bound = length_bound * (1 + 1e-12)
    dedup = _Dedup(surface)
    found: list[SaddleConnection] = []
    stops = [p.id for p in surface.vertex_classes if surface.is_stop_vertex(p.id)]
    corridors = 0

    def emit(sc: SaddleConnection):
        if dedup.add(sc):
            found.append(_canonical(sc, dedup))

    def corner_psi(chart_id, vertex, angle):
        fan = surface.fan(surface.class_of(chart_id, vertex))
        return fan.psi((chart_id, vertex), angle)

    for cone in stops:
        fan = surface.fan(cone)
        for ch, k in fan.corners:
            O = surface.chart(ch).vertices[k]
            for t0, kk in tri.triangles_at(ch, k):
                T = tri.triangles[t0]
                A = T.points[(kk + 1) % 3]
                B = T.points[(kk + 2) % 3]
                ax, ay = A[0] - O.x, A[1] - O.y
                bx, by = B[0] - O.x, B[1] - O.y

                def start_psi(dx, dy, ch=ch, k=k):
                    return fan.psi((ch, k), math.atan2(dy, dx) % TWO_PI)

                def ray_through_flat(dx, dy, ch=ch, k=k, cone=cone):
                    path = trace(surface, DirectedPoint(ch, surface.chart(ch).vertices[k],
                                                        math.atan2(dy, dx)), bound)
                    if not isinstance(path.terminal, ConePointHit):
                        return
                    h = path.terminal
                    u = (math.cos(math.atan2(dy, dx)), math.sin(math.atan2(dy, dx)))
                    L = path.length
                    arr = (math.cos(h.arrival_direction) * L, math.sin(h.arrival_direction) * L)
                    emit(SaddleConnection(cone, h.cone_point, PlanePoint(u[0] * L, u[1] * L), L,
                                          path.rotation, PlanePoint(*arr), (ch, k),
                                          (h.chart, h.vertex), start_psi(dx, dy), h.psi))

                def vertex_hit(vx, vy, t, corner, alpha, cs, sn, cone=cone, ch=ch, k=k):
                    tri_t = tri.triangles[t]
                    cls = tri_t.classes[corner]
                    L = math.hypot(vx, vy)
                    if L > bound:
                        return
                    if not surface.is_stop_vertex(cls):
                        ray_through_flat(vx, vy)
                        return
                    # arrival vector in the end chart: R(-alpha) D
                    arx, ary = cs * vx + sn * vy, -sn * vx + cs * vy
                    ech, ev = tri_t.chart, tri_t.vertices[corner]
                    emit(SaddleConnection(cone, cls, PlanePoint(vx, vy), L, -alpha,
                                          PlanePoint(arx, ary), (ch, k), (ech, ev),
                                          start_psi(vx, vy),
                                          corner_psi(ech, ev, math.atan2(-ary, -arx) % TWO_PI)))

                # the ray along the right side of this triangle corner
                vertex_hit(ax, ay, t0, (kk + 1) % 3, RotationClass.zero(), 1.0, 0.0)

                queue = deque()
                zero = RotationClass.zero()
                # state: triangle, exit edge, (alpha, cos, sin, tx, ty), wedge r, l
                queue.append((t0, (kk + 1) % 3, (zero, 1.0, 0.0, -O.x, -O.y), (ax, ay), (bx, by)))
                while queue:
                    t, ee, (alpha, cs, sn, tx, ty), (rx, ry), (lx, ly) = queue.popleft()
                    corridors += 1
                    if corridors > cap:
                        raise Explosion(f"more than {cap} corridors developed; "
                                        f"length bound {length_bound} is too large")
                    side = tri.sides[t][ee]
                    t2, e2 = side.tri, side.edge
                    alpha2 = alpha - side.rotation
                    c2, s2 = alpha2.cos_sin()
                    # T2(q) = R(alpha2) q + tau - R(alpha2) s
                    tx2 = tx - (c2 * side.tx - s2 * side.ty)
                    ty2 = ty - (s2 * side.tx + c2 * side.ty)
                    pts = tri.triangles[t2].points

                    def dev(p, c2=c2, s2=s2, tx2=tx2, ty2=ty2):
                        return c2 * p[0] - s2 * p[1] + tx2, s2 * p[0] + c2 * p[1] + ty2

                    Qx, Qy = dev(pts[e2])
                    Px, Py = dev(pts[(e2 + 1) % 3])
                    Cx, Cy = dev(pts[(e2 + 2) % 3])
                    tol = 1e-12 * max(1.0, Cx * Cx + Cy * Cy)
                    right_of = _cross(rx, ry, Cx, Cy) <= tol * math.hypot(rx, ry)
                    left_of = _cross(Cx, Cy, lx, ly) <= tol * math.hypot(lx, ly)
                    frame = (alpha2, c2, s2, tx2, ty2)
                    exits = []
                    if right_of:
                        exits.append(((e2 + 2) % 3, Cx, Cy, Qx, Qy, (rx, ry), (lx, ly)))
                    elif left_of:
                        exits.append(((e2 + 1) % 3, Px, Py, Cx, Cy, (rx, ry), (lx, ly)))
                    else:
                        vertex_hit(Cx, Cy, t2, (e2 + 2) % 3, alpha2, c2, s2)
                        exits.append(((e2 + 1) % 3, Px, Py, Cx, Cy, (rx, ry), (Cx, Cy)))
                        exits.append(((e2 + 2) % 3, Cx, Cy, Qx, Qy, (Cx, Cy), (lx, ly)))
                    for ex, x0, y0, x1, y1, r, l in exits:
                        d = _clip_distance(x0, y0, x1, y1, r[0], r[1], l[0], l[1])
                        if d is not None and d <= bound:
                            queue.append((t2, ex, frame, r, l))

    found.sort(key=lambda s: (s.length, s.direction, s.start_cone, s.psi_start))
    return found
