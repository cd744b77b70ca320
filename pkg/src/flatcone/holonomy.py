"""Holonomy of closed curves, computed from gluing rotations.

A closed curve is presented by the chart edges it crosses. Inside a chart
parallel transport is trivial, so the holonomy of the curve is the sum of
the rotations of the side maps it passes through, taken mod 2pi.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import OpenLoop
from .rational import RotationClass, pi_text
from .surface import ConePoint, EdgeRef, FlatConeSurface, angle_condition, AngleDecision


class Crossing(NamedTuple):
    """Crossing of ``edge`` of ``chart``.

    ``direction`` +1 leaves ``chart`` through the edge; -1 is the reverse
    crossing, arriving in ``chart`` through it from the glued side.
    """

    chart: int
    edge: int
    direction: int = 1


def _leaving(surface: FlatConeSurface, c: Crossing) -> EdgeRef:
    """The chart edge actually exited by crossing ``c``."""
    if c.direction == 1:
        return EdgeRef(c.chart, c.edge)
    if c.direction == -1:
        return surface.side((c.chart, c.edge)).partner
    raise ValueError(f"crossing direction must be +1 or -1, got {c.direction!r}")


def normalize(surface: FlatConeSurface, word: Iterable[Sequence[int]]) -> tuple[Crossing, ...]:
    """Rewrite every crossing in the +1 form of the edge it exits through."""
    out = []
    for c in word:
        c = Crossing(*c)
        try:
            ref = _leaving(surface, c)
        except KeyError:
            raise OpenLoop(f"crossing {tuple(c)} names an edge that does not exist") from None
        out.append(Crossing(ref.chart, ref.edge, 1))
    return tuple(out)


def inverse_crossing(surface: FlatConeSurface, c: Crossing) -> Crossing:
    ref = surface.side(_leaving(surface, c)).partner
    return Crossing(ref.chart, ref.edge, 1)


@dataclass(frozen=True)
class DualGraphLoop:
    """A closed curve given as its sequence of edge crossings."""

    word: tuple[Crossing, ...]
    label: str = ""

    @classmethod
    def of(cls, word: Iterable[Sequence[int]], label: str = "") -> DualGraphLoop:
        return cls(tuple(Crossing(*c) for c in word), label)

    def inverse(self, surface: FlatConeSurface) -> DualGraphLoop:
        return DualGraphLoop(tuple(inverse_crossing(surface, c) for c in reversed(self.word)),
                             self.label + "^-1" if self.label else "")

    def __mul__(self, other: DualGraphLoop) -> DualGraphLoop:
        return DualGraphLoop(self.word + other.word)

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.word]


def chart_sequence(surface: FlatConeSurface, word: Sequence[Crossing]) -> list[int]:
    """Charts visited; raises OpenLoop unless consecutive crossings chain and the word closes."""
    seq = []
    prev_end = None
    for i, c in enumerate(word):
        ref = _leaving(surface, Crossing(*c))
        if prev_end is not None and ref.chart != prev_end:
            raise OpenLoop(f"crossing {i} leaves chart {ref.chart} but the curve is in chart {prev_end}")
        seq.append(ref.chart)
        prev_end = surface.side(ref).partner.chart
    if seq and prev_end != seq[0]:
        raise OpenLoop(f"curve ends in chart {prev_end}, not its start chart {seq[0]}")
    return seq


def transport(surface: FlatConeSurface, loop: DualGraphLoop | Sequence[Sequence[int]]) -> RotationClass:
    """Rotation acquired by a tangent vector carried once around ``loop``."""
    word = loop.word if isinstance(loop, DualGraphLoop) else tuple(Crossing(*c) for c in loop)
    try:
        chart_sequence(surface, word)
    except KeyError as exc:
        raise OpenLoop(f"crossing names an edge that does not exist: {exc}") from None
    total = RotationClass.zero()
    for c in word:
        total = total + surface.side(_leaving(surface, c)).rotation
    return total


def cone_loop(surface: FlatConeSurface, class_id: int) -> DualGraphLoop:
    """Small loop around a vertex class, oriented clockwise.

    Clockwise orientation makes the transport equal the cone angle mod 2pi;
    the counterclockwise loop gives its negative.
    """
    fan = surface.fan(class_id)
    word = []
    for ch, k in reversed(fan.corners):
        n = surface.chart(ch).n
        word.append(Crossing(ch, (k - 1) % n, -1))
    return DualGraphLoop(tuple(normalize(surface, word)), f"cone{class_id}")


def _tree(surface: FlatConeSurface):
    """BFS spanning tree of the dual graph; returns parent crossings and tree gluings."""
    root = surface.charts[0].id
    path: dict[int, tuple[Crossing, ...]] = {root: ()}
    tree = set()
    queue = deque([root])
    while queue:
        c = queue.popleft()
        chart = surface.chart(c)
        for e in range(chart.n):
            side = surface.side((c, e))
            d = side.partner.chart
            if d not in path:
                path[d] = path[c] + (Crossing(c, e, 1),)
                tree.add(side.gluing)
                queue.append(d)
    return root, path, tree


def generating_loops(surface: FlatConeSurface, include_cones: bool = True) -> list[DualGraphLoop]:
    """One loop per gluing outside a spanning tree of the dual graph, then one per cone point."""
    root, path, tree = _tree(surface)
    loops = []
    for i, g in enumerate(surface.gluings):
        if g in tree:
            continue
        a = path[g.source.chart]
        b = path[g.target.chart]
        back = tuple(inverse_crossing(surface, c) for c in reversed(b))
        loops.append(DualGraphLoop(a + (Crossing(g.source.chart, g.source.edge, 1),) + back,
                                   f"g{i}"))
    if include_cones:
        for p in surface.cone_points:
            loops.append(cone_loop(surface, p.id))
    return loops


@dataclass
class HolonomyReport:
    generator_rotations: list[tuple[DualGraphLoop, RotationClass]]
    cone_rotations: list[tuple[ConePoint, RotationClass]]
    group_is_pm_identity: bool
    witnesses: list[tuple[str, RotationClass]] = field(default_factory=list)
    approximate: bool = False

    def __bool__(self) -> bool:
        return self.group_is_pm_identity

    def to_dict(self) -> dict:
        return {
            "generators": [{"loop": lp.label, "word": lp.to_json(), "rotation_pi": str(r.fraction)}
                           for lp, r in self.generator_rotations],
            "cone_rotations": [{"cone_point": p.id, "rotation_pi": str(r.fraction)}
                               for p, r in self.cone_rotations],
            "group_is_pm_identity": self.group_is_pm_identity,
            "witnesses": [{"what": w, "rotation_pi": str(r.fraction)} for w, r in self.witnesses],
            "approximate": self.approximate,
        }


def holonomy_condition(surface: FlatConeSurface) -> HolonomyReport:
    """Whether every holonomy value is a rotation by 0 or pi."""
    gens = [(lp, transport(surface, lp)) for lp in generating_loops(surface, include_cones=False)]
    cones = [(p, transport(surface, cone_loop(surface, p.id))) for p in surface.cone_points]
    witnesses = [(lp.label, r) for lp, r in gens if not r.is_pm_identity()]
    witnesses += [(f"cone{p.id}", r) for p, r in cones if not r.is_pm_identity()]
    approximate = any(not p.exact for p in surface.cone_points)
    return HolonomyReport(gens, cones, not witnesses, witnesses, approximate)


@dataclass
class QDDecision:
    """Whether the metric comes from a holomorphic quadratic differential."""

    yes: bool
    reasons: list[str]
    angles: AngleDecision
    holonomy: HolonomyReport

    @property
    def approximate(self) -> bool:
        return self.angles.approximate or self.holonomy.approximate

    def __bool__(self) -> bool:
        return self.yes

    def to_dict(self) -> dict:
        return {
            "decision": "yes" if self.yes else "no",
            "reasons": self.reasons,
            "approximate": self.approximate,
            "angle_witnesses": [{"cone_point": p.id, "angle_pi": str(a) if p.exact else None,
                                 "angle": p.angle} for p, a in self.angles.witnesses],
            "holonomy": self.holonomy.to_dict(),
        }


def is_quadratic_differential_metric(surface: FlatConeSurface) -> QDDecision:
    """Both conditions: every cone angle is k*pi with k >= 3, and holonomy lies in {0, pi}."""
    angles = angle_condition(surface)
    hol = holonomy_condition(surface)
    reasons = []
    for p, a in angles.witnesses:
        txt = pi_text(a) if p.exact else f"{a!r} rad"
        reasons.append(f"cone point {p.id} has angle {txt}, not an integer multiple k*pi with k >= 3")
    for what, r in hol.witnesses:
        reasons.append(f"holonomy of loop {what} is {r}, not 0 or pi")
    return QDDecision(not reasons, reasons, angles, hol)
