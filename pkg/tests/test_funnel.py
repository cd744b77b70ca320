import math
import random

import pytest

from flatcone.funnel import funnel


def corridor(rng: random.Random, k: int):
    """Vertical portals at increasing x; left is the upper end for a traveller going +x."""
    xs, x = [], 0.0
    for _ in range(k):
        x += rng.uniform(0.3, 1.5)
        xs.append(x)
    portals = []
    for xi in xs:
        lo = rng.uniform(-2, 1.5)
        hi = lo + rng.uniform(0.05, 2)
        portals.append(((xi, hi), (xi, lo)))
    start = (0.0, rng.uniform(-1, 1))
    end = (x + rng.uniform(0.3, 1.5), rng.uniform(-1, 1))
    return start, end, portals


def oracle_length(start, end, portals, sweeps=4000):
    """Coordinate descent on the crossing heights; the objective is convex."""
    xs = [start[0]] + [p[0][0] for p in portals] + [end[0]]
    ys = [start[1]] + [(p[0][1] + p[1][1]) / 2 for p in portals] + [end[1]]
    for _ in range(sweeps):
        for i in range(1, len(xs) - 1):
            hi, lo = portals[i - 1][0][1], portals[i - 1][1][1]
            t = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1])
            ys[i] = min(hi, max(lo, ys[i - 1] + t * (ys[i + 1] - ys[i - 1])))
    return sum(math.hypot(xs[i + 1] - xs[i], ys[i + 1] - ys[i]) for i in range(len(xs) - 1))


def test_no_portals_is_a_segment():
    p = funnel((0, 0), (3, 4), [])
    assert p.points == [(0, 0), (3, 4)] and p.length == 5 and p.supports == []


def test_wide_portals_give_a_straight_line():
    p = funnel((0, 0), (4, 0), [((1, 1), (1, -1)), ((2, 5), (2, -5)), ((3, 1), (3, -1))])
    assert p.points == [(0, 0), (4, 0)]


def test_bend_around_a_corner():
    # an L-shaped corridor: the path wraps the inner corner (1, 1)
    p = funnel((0.5, 0), (2, 1.5), [((0, 1), (1, 1)), ((1, 2), (1, 1))])
    assert p.points[1] == (1, 1)
    assert math.isclose(p.length, 2 * math.hypot(0.5, 1))


@pytest.mark.parametrize("seed", range(60))
def test_matches_convex_oracle(seed):
    rng = random.Random(seed)
    start, end, portals = corridor(rng, rng.randint(1, 8))
    p = funnel(start, end, portals)
    assert math.isclose(p.length, oracle_length(start, end, portals), rel_tol=1e-6)
    # corners are portal endpoints named by their supports
    for q, (j, side) in zip(p.points[1:-1], p.supports):
        assert q == (portals[j][0] if side == "L" else portals[j][1])
