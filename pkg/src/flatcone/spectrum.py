"""Lengths of closed geodesics in given homotopy classes.

A class is presented by a cyclic word of chart-edge crossings. The word is
refined to a cyclic chain of triangles (a sleeve) and developed into the
plane; going once around the word maps the first triangle to its copy by a
deck isometry ``z -> R(rho) z + c``. The shortest closed curve in the
sleeve either is a straight line (only possible when rho = 0) or passes
through a sleeve vertex, where it is found with the funnel algorithm. If it
bends at a vertex whose angle on the far side is below pi, the curve is not
a geodesic of the surface: the sleeve is rerouted around the other side of
that vertex and the computation repeats. Nonpositive curvature makes the
final locally geodesic curve the shortest in its class.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import NonConvergent, NullHomotopic, OpenLoop, WordInvalidOnB
from .funnel import funnel
from .holonomy import Crossing, chart_sequence, normalize
from .rational import RotationClass
from .surface import EdgeRef, FlatConeSurface, SurfaceError

MAX_PIVOTS = 10_000
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class CurveWord:
    """Cyclic word of crossings ``(chart, edge, direction)``."""

    crossings: tuple[Crossing, ...]

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(Crossing(*c) for c in self.crossings))
        if not self.crossings:
            raise ValueError("a curve word needs at least one crossing")

    @classmethod
    def of(cls, word: Iterable[Sequence[int]]) -> CurveWord:
        return cls(tuple(Crossing(*c) for c in word))

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.crossings]

    def __len__(self):
        return len(self.crossings)


@dataclass
class SpectrumEntry:
    word: CurveWord
    length: float
    tightening_iterations: int
    flat_strip_flag: bool
    history: list[float] = field(default_factory=list)
    error: str | None = None


# -- word reduction ----------------------------------------------------------

def reduce_word(surface: FlatConeSurface, word: Iterable[Sequence[int]]) -> tuple[Crossing, ...]:
    """Normalise crossings and cancel adjacent inverse pairs, cyclically."""
    w = normalize(surface, word)
    chart_sequence(surface, w)

    def cancels(a: Crossing, b: Crossing) -> bool:
        return surface.side((a.chart, a.edge)).partner == (b.chart, b.edge)

    return _cyclic_reduce(w, cancels)


def _cyclic_reduce(word, cancels) -> tuple:
    stack: list = []
    for c in word:
        if stack and cancels(stack[-1], c):
            stack.pop()
        else:
            stack.append(c)
    lo, hi = 0, len(stack) - 1
    while lo < hi and cancels(stack[hi], stack[lo]):
        lo += 1
        hi -= 1
    return tuple(stack[lo:hi + 1])


# -- sleeves -----------------------------------------------------------------

def _chart_tree_path(tri, chart_id: int, t_from: int, t_to: int) -> list[tuple[int, int]]:
    """Diagonal crossings (triangle, edge) leading from t_from to t_to inside one chart."""
    if t_from == t_to:
        return []
    prev: dict[int, tuple[int, int]] = {t_from: (-1, -1)}
    q = deque([t_from])
    while q:
        t = q.popleft()
        for e in range(3):
            s = tri.sides[t][e]
            if s.original is None and s.tri not in prev:
                prev[s.tri] = (t, e)
                if s.tri == t_to:
                    q.clear()
                    break
                q.append(s.tri)
    out = []
    t = t_to
    while t != t_from:
        pt, pe = prev[t]
        out.append((pt, pe))
        t = pt
    return out[::-1]


def sleeve_of_word(surface: FlatConeSurface, word: Sequence[Crossing]) -> list[tuple[int, int]]:
    """Cyclic list of triangle crossings ``(triangle, edge)`` following a reduced word."""
    tri = surface.triangulation
    out = []
    m = len(word)
    for i, c in enumerate(word):
        prev = word[i - 1]
        entry = surface.side((prev.chart, prev.edge)).partner
        t_in, _ = tri.triangle_of_edge(entry)
        t_out, e_out = tri.triangle_of_edge(EdgeRef(c.chart, c.edge))
        out.extend(_chart_tree_path(tri, c.chart, t_in, t_out))
        out.append((t_out, e_out))
    return list(_cyclic_reduce(out, lambda a, b: _tri_partner(tri, a) == b))


def _tri_partner(tri, x: tuple[int, int]) -> tuple[int, int]:
    s = tri.sides[x[0]][x[1]]
    return (s.tri, s.edge)


def _star_step(tri, t: int, k: int, ccw: bool) -> tuple[tuple[int, int], tuple[int, int]]:
    """Cross to the neighbouring corner around the vertex at corner k of t.

    Returns the crossing made and the new (triangle, corner).
    """
    if ccw:
        e = (k - 1) % 3
        s = tri.sides[t][e]
        return (t, e), (s.tri, s.edge)
    s = tri.sides[t][k]
    return (t, k), (s.tri, (s.edge + 1) % 3)


def _star_size(tri, t: int, k: int) -> int:
    n, cur = 0, (t, k)
    while True:
        _, cur = _star_step(tri, cur[0], cur[1], True)
        n += 1
        if cur == (t, k):
            return n


@dataclass
class _Developed:
    crossings: list[tuple[int, int]]
    tris: list[int]
    entry: list[int]            # entry edge of tris[j] (from crossing j-1)
    pts: list[list[tuple[float, float]]]   # developed triangle points, period 0
    rot: RotationClass           # deck rotation
    cos: float
    sin: float
    tx: float
    ty: float

    @property
    def m(self) -> int:
        return len(self.crossings)

    def deck(self, p, k: int = 1):
        x, y = p
        for _ in range(abs(k)):
            if k > 0:
                x, y = self.cos * x - self.sin * y + self.tx, self.sin * x + self.cos * y + self.ty
            else:
                x, y = x - self.tx, y - self.ty
                x, y = self.cos * x + self.sin * y, -self.sin * x + self.cos * y
        return x, y

    def tri_points(self, J: int):
        k, j = divmod(J, self.m)
        return [self.deck(p, k) for p in self.pts[j]]

    def portal(self, J: int):
        """(left, right) endpoints of portal J (between triangles J and J+1)."""
        k, j = divmod(J, self.m)
        e = self.crossings[j][1]
        P = self.pts[j][e]
        Q = self.pts[j][(e + 1) % 3]
        return self.deck(Q, k), self.deck(P, k)

    def tri_at(self, J: int) -> int:
        return self.tris[J % self.m]

    def entry_at(self, J: int) -> int:
        return self.entry[J % self.m]

    def exit_at(self, J: int) -> int:
        return self.crossings[J % self.m][1]


def _develop(surface: FlatConeSurface, crossings: list[tuple[int, int]]) -> _Developed:
    tri = surface.triangulation
    m = len(crossings)
    alpha = RotationClass.zero()
    c, s, tx, ty = 1.0, 0.0, 0.0, 0.0
    pts, tris, entry = [], [], [0] * m
    for j, (t, e) in enumerate(crossings):
        tris.append(t)
        pts.append([(c * x - s * y + tx, s * x + c * y + ty) for x, y in tri.triangles[t].points])
        side = tri.sides[t][e]
        entry[(j + 1) % m] = side.edge
        alpha = alpha - side.rotation
        c, s = alpha.cos_sin()
        tx = tx - (c * side.tx - s * side.ty)
        ty = ty - (s * side.tx + c * side.ty)
    return _Developed(list(crossings), tris, entry, pts, alpha, c, s, tx, ty)


@dataclass
class _Run:
    side: str        # "L" or "R"
    j1: int          # first portal sharing the vertex (may be negative)
    j2: int          # last portal sharing it
    cls: int         # vertex class


def _runs(surface: FlatConeSurface, dev: _Developed) -> list[_Run]:
    """Maximal runs of consecutive portals sharing a left (or right) endpoint."""
    tri = surface.triangulation
    m = dev.m
    # shares[j]: side on which portal j and portal j+1 share their endpoint
    shares = []
    for j in range(m):
        e2 = dev.entry_at(j + 1)
        ex = dev.exit_at(j + 1)
        shares.append("R" if ex == (e2 + 1) % 3 else "L")
    runs = []
    for side in ("L", "R"):
        flags = [sh == side for sh in shares]
        if all(flags):
            raise NullHomotopic("every portal of the corridor meets one vertex: "
                                "the curve only encircles a point")
        # a run starts at a portal j where portal j-1 does not share with j
        for j in range(m):
            if flags[j - 1]:
                continue
            j2 = j
            while flags[j2 % m]:
                j2 += 1
            t = dev.tris[j]
            e = dev.crossings[j][1]
            corner = (e + 1) % 3 if side == "L" else e
            runs.append(_Run(side, j, j2, tri.triangles[t].classes[corner]))
    return runs


def _corner_of_run(dev: _Developed, run: _Run, J: int) -> int:
    """Corner index of the run's vertex in triangle J (j1 <= J <= j2 + 1)."""
    if J == run.j1:
        e = dev.exit_at(J)
        return (e + 1) % 3 if run.side == "L" else e
    e2 = dev.entry_at(J)
    return e2 if run.side == "L" else (e2 + 1) % 3


def _angle_between(o, a, b) -> float:
    ux, uy = a[0] - o[0], a[1] - o[1]
    vx, vy = b[0] - o[0], b[1] - o[1]
    return abs(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))


def _inside_angle(surface, dev: _Developed, run: _Run, shift: int, prev_pt, next_pt) -> float:
    """Angle at the run's vertex between the path's neighbours, measured through the sleeve.

    ``shift`` moves the incoming triangle by that many portals; the closing
    vertex uses one full period, since its incoming neighbour is developed
    one deck translate further on.
    """
    tri = surface.triangulation
    F = 0.0
    for J in range(run.j1, run.j2 + 2):
        F += tri.corner_angle(dev.tri_at(J), _corner_of_run(dev, run, J))
    # incoming side, triangle j1 (+shift periods)
    Ja = run.j1 + shift
    pa = dev.tri_points(Ja)
    ka = _corner_of_run(dev, run, run.j1)
    outer_a = pa[(dev.exit_at(Ja) + 2) % 3]
    gap_a = _angle_between(pa[ka], outer_a, prev_pt)
    Jb = run.j2 + 1
    pb = dev.tri_points(Jb)
    kb = _corner_of_run(dev, run, Jb)
    outer_b = pb[(dev.entry_at(Jb) + 2) % 3]
    gap_b = _angle_between(pb[kb], outer_b, next_pt)
    return F - gap_a - gap_b


def _straight_fit(dev: _Developed, eps: float) -> tuple[bool, float]:
    """For a translation deck map: can one straight line cross every portal?"""
    cx, cy = dev.tx, dev.ty
    L = math.hypot(cx, cy)
    if L <= eps:
        return False, 0.0
    nx, ny = -cy / L, cx / L
    lo, hi = -math.inf, math.inf
    for j in range(dev.m):
        (ax, ay), (bx, by) = dev.portal(j)
        u, v = ax * nx + ay * ny, bx * nx + by * ny
        lo = max(lo, min(u, v))
        hi = min(hi, max(u, v))
    # a zero-width strip only touches a vertex; that curve is judged at the vertex
    if hi - lo <= 10 * eps:
        return False, hi - lo
    # crossing points must advance along c
    s = 0.5 * (lo + hi)
    prev = -math.inf
    for j in range(dev.m):
        (ax, ay), (bx, by) = dev.portal(j)
        u, v = ax * nx + ay * ny, bx * nx + by * ny
        w = 0.5 if abs(v - u) < 1e-300 else (s - u) / (v - u)
        px, py = ax + w * (bx - ax), ay + w * (by - ay)
        along = (px * cx + py * cy) / L
        if along < prev - 10 * eps:
            return False, hi - lo
        prev = along
    return True, max(hi - lo, 0.0)


@dataclass
class _Best:
    length: float
    run: _Run
    path: object


def _shortest_through_vertex(surface, dev: _Developed, runs: list[_Run]) -> _Best:
    m = dev.m
    best = None
    for run in runs:
        w = dev.portal(run.j1)[0 if run.side == "L" else 1]
        end = dev.deck(w, 1)
        portals = [dev.portal(J) for J in range(run.j2 + 1, run.j1 + m)]
        path = funnel(w, end, portals)
        L = path.length
        if best is None or L < best.length - 1e-12:
            best = _Best(L, run, (path, run.j2 + 1))
    if best is None:
        raise NullHomotopic("no vertex of the corridor can anchor a closed curve")
    return best


def _run_containing(runs: list[_Run], m: int, J: int, side: str) -> tuple[_Run, int]:
    """The run on ``side`` containing portal J, and the period shift applied to it."""
    for run in runs:
        if run.side != side:
            continue
        for shift in (-m, 0, m, 2 * m):
            if run.j1 + shift <= J <= run.j2 + shift:
                return run, shift
    raise AssertionError(f"portal {J} on side {side} is in no run")


def _pivot(surface, dev: _Developed, run: _Run) -> list[tuple[int, int]]:
    """Reroute the sleeve around the other side of the run's vertex."""
    tri = surface.triangulation
    m = dev.m
    r = run.j2 - run.j1 + 1
    t1 = dev.tri_at(run.j1)
    k1 = _corner_of_run(dev, run, run.j1)
    first = dev.crossings[run.j1 % m]
    ccw = first[1] == (k1 - 1) % 3
    s = _star_size(tri, t1, k1)
    steps, direction = (s - r, not ccw) if s >= r else (r - s, ccw)
    route = []
    cur = (t1, k1)
    for _ in range(steps):
        x, cur = _star_step(tri, cur[0], cur[1], direction)
        route.append(x)
    rest = [dev.crossings[(run.j1 + i) % m] for i in range(r, m)]
    new = route + rest
    return list(_cyclic_reduce(new, lambda a, b: _tri_partner(tri, a) == b))


def geodesic_length(surface: FlatConeSurface, word: CurveWord | Iterable[Sequence[int]], *,
                    max_pivots: int = MAX_PIVOTS) -> SpectrumEntry:
    """Length of the closed geodesic freely homotopic to the curve ``word``.

    Raises NullHomotopic when the word bounds a disc (possibly around a
    cone point) and NonConvergent after ``max_pivots`` reroutings.
    """
    if not isinstance(word, CurveWord):
        word = CurveWord.of(word)
    reduced = reduce_word(surface, word.crossings)
    if not reduced:
        raise NullHomotopic("the word reduces to the empty word")
    crossings = sleeve_of_word(surface, reduced)
    eps = surface.eps_geom
    history: list[float] = []
    pivots = 0
    while True:
        if not crossings:
            raise NullHomotopic("the corridor reduces to nothing")
        dev = _develop(surface, crossings)
        runs = _runs(surface, dev)
        if dev.rot.is_identity():
            fits, width = _straight_fit(dev, eps)
            if fits:
                L = math.hypot(dev.tx, dev.ty)
                history.append(L)
                return SpectrumEntry(word, L, pivots, True, history)
        best = _shortest_through_vertex(surface, dev, runs)
        history.append(best.length)
        path, offset = best.path
        pts = path.points
        # angle on the far side of every corner of the closed curve
        worst = None
        m = dev.m
        for (idx, side), q in zip(path.supports, range(1, len(pts) - 1)):
            J = offset + idx
            run, shift = _run_containing(runs, m, J, side)
            run = _Run(run.side, run.j1 + shift, run.j2 + shift, run.cls)
            A = _inside_angle(surface, dev, run, 0, pts[q - 1], pts[q + 1])
            B = surface.vertex_classes[run.cls].angle - A
            if worst is None or B < worst[0]:
                worst = (B, run)
        # the closing vertex
        run = best.run
        A = _inside_angle(surface, dev, run, m, pts[-2], pts[1])
        B = surface.vertex_classes[run.cls].angle - A
        if worst is None or B < worst[0]:
            worst = (B, run)
        if worst[0] >= math.pi - ANGLE_TOL:
            return SpectrumEntry(word, best.length, pivots, False, history)
        if pivots >= max_pivots:
            raise NonConvergent(f"no geodesic after {max_pivots} pivots "
                                f"(current length {best.length:.12g})")
        crossings = _pivot(surface, dev, worst[1])
        pivots += 1


def marked_spectrum(surface: FlatConeSurface, words: Iterable[CurveWord | Sequence]) -> list[SpectrumEntry]:
    """One entry per word, in order; failures are recorded in the entry's ``error``."""
    out = []
    for w in words:
        cw = w if isinstance(w, CurveWord) else CurveWord.of(w)
        try:
            out.append(geodesic_length(surface, cw))
        except (NullHomotopic, NonConvergent, OpenLoop, KeyError, ValueError) as exc:
            out.append(SpectrumEntry(cw, math.nan, 0, False, [], f"{type(exc).__name__}: {exc}"))
    return out


@dataclass
class SpectrumComparison:
    rows: list[tuple[int, float, float, float]]   # word id, length a, length b, ratio b/a
    max_relative_difference: float


def compare_spectra(surface_a: FlatConeSurface, surface_b: FlatConeSurface,
                    words: Iterable[CurveWord | Sequence]) -> SpectrumComparison:
    """Lengths of the same words on two surfaces with the same combinatorics."""
    rows = []
    worst = 0.0
    for i, w in enumerate(words):
        cw = w if isinstance(w, CurveWord) else CurveWord.of(w)
        la = geodesic_length(surface_a, cw).length
        try:
            lb = geodesic_length(surface_b, cw).length
        except (OpenLoop, KeyError) as exc:
            raise WordInvalidOnB(f"word {i} is not a closed curve on the second surface: {exc}") from exc
        rows.append((i, la, lb, lb / la))
        worst = max(worst, abs(lb - la) / la)
    return SpectrumComparison(rows, worst)


def load_words(path: str | Path) -> list[CurveWord]:
    """Words file: a JSON list of words, each a list of [chart, edge, direction]."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return [CurveWord.of(w) for w in data]
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise SurfaceError(f"{path}: malformed words file ({exc})") from exc
