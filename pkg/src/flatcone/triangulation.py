"""Triangulated view of a surface.

Each chart is split by ear clipping; no vertices are added, so vertex
classes and cone points are unchanged. Diagonals inside a chart are glued by
the identity. Unfolding searches work on this view because every triangle
is convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rational import RotationClass
from .surface import EdgeRef, FlatConeSurface, PolygonChart


@dataclass(frozen=True)
class Triangle:
    id: int
    chart: int
    points: tuple[tuple[float, float], ...]
    vertices: tuple[int, int, int]   # vertex indices in the chart
    classes: tuple[int, int, int]    # vertex class ids


@dataclass(frozen=True)
class TriSide:
    """Transition when leaving a triangle through one of its edges."""

    tri: int
    edge: int
    rotation: RotationClass
    cos: float
    sin: float
    tx: float
    ty: float
    original: EdgeRef | None  # chart edge crossed, None for a diagonal

    def point(self, p):
        return (self.cos * p[0] - self.sin * p[1] + self.tx,
                self.sin * p[0] + self.cos * p[1] + self.ty)

    def vector(self, v):
        return (self.cos * v[0] - self.sin * v[1], self.sin * v[0] + self.cos * v[1])


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def ear_clip(chart: PolygonChart) -> list[tuple[int, int, int]]:
    """Triangles (counterclockwise vertex index triples) covering the polygon."""
    pts = chart.vertices
    idx = list(range(chart.n))
    scale = max(max(abs(p.x), abs(p.y)) for p in pts) or 1.0
    tol = 1e-12 * scale * scale
    out = []
    while len(idx) > 3:
        m = len(idx)
        for j in range(m):
            i0, i1, i2 = idx[j - 1], idx[j], idx[(j + 1) % m]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if _cross(a, b, c) <= tol:
                continue
            blocked = False
            for k in idx:
                if k in (i0, i1, i2):
                    continue
                p = pts[k]
                if (_cross(a, b, p) >= -tol and _cross(b, c, p) >= -tol
                        and _cross(c, a, p) >= -tol):
                    blocked = True
                    break
            if not blocked:
                out.append((i0, i1, i2))
                del idx[j]
                break
        else:
            raise ValueError(f"chart {chart.id}: ear clipping failed")
    out.append(tuple(idx))
    return out


class Triangulation:
    def __init__(self, surface: FlatConeSurface):
        self.surface = surface
        self.triangles: list[Triangle] = []
        # (chart, edge) -> (triangle, triangle edge)
        self._of_edge: dict[EdgeRef, tuple[int, int]] = {}
        diag: dict[tuple[int, int, int], tuple[int, int]] = {}
        for chart in surface.charts:
            for tri in ear_clip(chart):
                tid = len(self.triangles)
                self.triangles.append(Triangle(
                    tid, chart.id, tuple(tuple(chart.vertices[v]) for v in tri), tri,
                    tuple(surface.class_of(chart.id, v) for v in tri)))
                for e in range(3):
                    a, b = tri[e], tri[(e + 1) % 3]
                    if b == (a + 1) % chart.n:
                        self._of_edge[EdgeRef(chart.id, a)] = (tid, e)
                    else:
                        diag[(chart.id, a, b)] = (tid, e)
        zero = RotationClass.zero()
        self.sides: list[list[TriSide]] = [[None] * 3 for _ in self.triangles]  # type: ignore
        for (cid, a, b), (tid, e) in diag.items():
            t2, e2 = diag[(cid, b, a)]
            self.sides[tid][e] = TriSide(t2, e2, zero, 1.0, 0.0, 0.0, 0.0, None)
        for ref, (tid, e) in self._of_edge.items():
            s = surface.side(ref)
            t2, e2 = self._of_edge[s.partner]
            self.sides[tid][e] = TriSide(t2, e2, s.rotation, s.cos, s.sin, s.tx, s.ty, ref)

    def __len__(self):
        return len(self.triangles)

    def triangle_of_edge(self, ref: EdgeRef) -> tuple[int, int]:
        return self._of_edge[EdgeRef(*ref)]

    def side(self, tri: int, edge: int) -> TriSide:
        return self.sides[tri][edge]

    def corner_angle(self, tri: int, k: int) -> float:
        p = self.triangles[tri].points
        a, v, b = p[(k - 1) % 3], p[k], p[(k + 1) % 3]
        u = (b[0] - v[0], b[1] - v[1])
        w = (a[0] - v[0], a[1] - v[1])
        return math.atan2(u[0] * w[1] - u[1] * w[0], u[0] * w[0] + u[1] * w[1])

    def triangles_at(self, chart: int, vertex: int) -> list[tuple[int, int]]:
        """(triangle, corner) pairs whose corner sits at chart vertex ``vertex``."""
        out = []
        for t in self.triangles:
            if t.chart == chart:
                for k in range(3):
                    if t.vertices[k] == vertex:
                        out.append((t.id, k))
        return out

    def locate(self, chart: int, p) -> int:
        """Triangle of ``chart`` containing point ``p`` (closed)."""
        best, best_val = None, -math.inf
        for t in self.triangles:
            if t.chart != chart:
                continue
            a, b, c = t.points
            val = min(_cross(a, b, p), _cross(b, c, p), _cross(c, a, p))
            if val > best_val:
                best, best_val = t.id, val
        return best


def triangulate(surface: FlatConeSurface) -> Triangulation:
    return Triangulation(surface)
