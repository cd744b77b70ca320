"""Shortest paths through a chain of portals (the funnel algorithm).

Portals are segments given as (left, right) endpoint pairs as seen by a
traveller moving from the start point to the end point. The path returned
is the taut string from start to end that passes through every portal in
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

Point = tuple[float, float]


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _same(a: Point, b: Point, tol: float) -> bool:
    return abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol


@dataclass(frozen=True)
class FunnelPath:
    points: list[Point]
    # for every interior point: (portal index, "L" or "R") it came from
    supports: list[tuple[int, str]]

    @property
    def length(self) -> float:
        return sum(math.hypot(b[0] - a[0], b[1] - a[1])
                   for a, b in zip(self.points, self.points[1:]))


def funnel(start: Point, end: Point, portals: Sequence[tuple[Point, Point]],
           tol: float = 1e-12) -> FunnelPath:
    """Taut path from ``start`` to ``end`` through ``portals`` in order."""
    ports = [(start, start)] + [(tuple(l), tuple(r)) for l, r in portals] + [(end, end)]
    scale = max(1.0, max(abs(c) for p in ports for q in p for c in q))
    ctol = tol * scale * scale
    ptol = tol * scale
    apex = left = right = start
    apex_i = left_i = right_i = 0
    points = [start]
    supports: list[tuple[int, str]] = []
    i = 1
    n = len(ports)
    while i < n:
        l, r = ports[i]
        # tighten the right side
        if _cross(apex, right, r) >= -ctol:
            if _same(apex, right, ptol) or _cross(apex, left, r) <= ctol:
                right, right_i = r, i
            else:
                # right crosses over left: left becomes a corner of the path
                points.append(left)
                supports.append((left_i, "L"))
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        # tighten the left side
        if _cross(apex, left, l) <= ctol:
            if _same(apex, left, ptol) or _cross(apex, right, l) >= -ctol:
                left, left_i = l, i
            else:
                points.append(right)
                supports.append((right_i, "R"))
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    points.append(end)
    # indices are into the padded list; shift to the caller's portal numbering
    return FunnelPath(points, [(k - 1, s) for k, s in supports])
