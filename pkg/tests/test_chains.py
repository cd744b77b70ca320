import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flatcone import (Chain, chain_invariants, cone_angle_bounds, estimate_cone_angle_from_surface,
                      perfectly_interlaced, sweep_count, sweep_counts)
from flatcone.chains import parse_theta_pi


def simulate_sweeps(a: np.ndarray, b: int, n_max: int) -> np.ndarray:
    """Move a point by pi at a time around cones of angle (a/b)pi, counting passes.

    Positions are kept in integer units of pi/b. Returns R[theta, n-1].
    """
    pos = np.zeros_like(a)
    passes = np.zeros_like(a)
    R = np.zeros((len(a), n_max), dtype=np.int64)
    m = 0
    while (R[:, -1] == 0).any():
        m += 1
        pos = pos + b
        wrapped = pos >= a
        pos = np.where(wrapped, pos - a, pos)
        passes = passes + wrapped
        for n in range(1, n_max + 1):
            hit = (passes == n) & wrapped & (R[:, n - 1] == 0)
            R[hit, n - 1] = m
    return R


def orbit(p: int, q: int):
    """Directions i*pi mod (p/q)pi in units of pi/q until they repeat."""
    seen, i = [], 0
    while True:
        x = (i * q) % p
        if x in seen:
            return seen
        seen.append(x)
        i += 1


def test_five_halves_formula():
    for n in range(1, 201):
        expected = 5 * n // 2 if n % 2 == 0 else (5 * n + 1) // 2
        assert sweep_count(Fraction(5, 2), n) == expected
    inv = chain_invariants(Chain("5/2"))
    assert (inv.periodic, inv.k, inv.n) == (True, 5, 3)


def test_two_pi():
    assert [sweep_count(2, n) for n in range(1, 6)] == [2, 4, 6, 8, 10]
    iv = cone_angle_bounds(Chain(2), 7)   # a bare int is read as R(n)
    assert iv.contains(2) and iv.width_pi == Fraction(1, 7)


def test_closed_form_matches_simulation_on_grid():
    # theta/pi = 2 + 8k/9999, k = 0..9999: 10^4 angles in [2pi, 10pi]
    b = 9999
    a = np.array([2 * b + 8 * k for k in range(10_000)], dtype=np.int64)
    sim = simulate_sweeps(a, b, 50)
    for i in range(0, 10_000, 1):
        tp = Fraction(int(a[i]), b)
        row = sim[i]
        for n in (1, 2, 3, 7, 20, 50):
            assert row[n - 1] == sweep_count(tp, n)
    # full comparison on a subsample
    for i in range(0, 10_000, 97):
        tp = Fraction(int(a[i]), b)
        assert sim[i].tolist() == [sweep_count(tp, n) for n in range(1, 51)]


def test_irrational_against_simulation():
    theta = 2 * math.sqrt(2) * math.pi
    pos, passes, m, R = 0.0, 0, 0, []
    while len(R) < 20:
        m += 1
        pos += math.pi
        if pos >= theta:
            pos -= theta
            passes += 1
            R.append(m)
    assert R == [sweep_count(2 * math.sqrt(2), n) for n in range(1, 21)]


def test_sweep_count_properties():
    for tp in (Fraction(5, 2), Fraction(7, 3), 6, 2 * math.sqrt(2)):
        sc = sweep_counts(tp, 60)
        vals = [sc[n] for n in range(1, 61)]
        assert vals == sorted(vals)
        assert all(v >= 2 * n for n, v in enumerate(vals, 1))
    with pytest.raises(ValueError):
        sweep_count(3, 0)


@pytest.mark.parametrize("tp, n", [(Fraction(5, 2), 100), (Fraction(7, 2), 1000), (2, 9)])
def test_bound_examples(tp, n):
    iv = cone_angle_bounds(sweep_counts(tp, n), n)
    assert iv.contains(tp) and iv.width_pi == Fraction(1, n)
    if tp == Fraction(5, 2):
        assert (iv.lo_pi, iv.hi_pi) == (Fraction(249, 100), Fraction(250, 100))


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=2.0, max_value=10.0, allow_nan=False), st.integers(1, 400))
def test_bounds_contain_theta(tp, n):
    iv = cone_angle_bounds(Chain(tp), n)
    assert iv.contains(parse_theta_pi(tp))
    assert iv.width_pi == Fraction(1, n)


def test_invariant_oracle_by_orbit_simulation():
    for p in range(2, 51):
        for q in range(1, p // 2 + 1):
            if math.gcd(p, q) != 1:
                continue
            pts = orbit(p, q)
            step = pts.index(min(x for x in pts if x > 0))     # next point counterclockwise
            inv = chain_invariants(Fraction(p, q))
            assert inv.periodic
            assert (inv.k, inv.n) == (len(pts), step)
            assert (inv.n * q) % p == 1 % p


@pytest.mark.parametrize("tp, k, n", [("3", 3, 1), ("5/2", 5, 3), ("7/3", 7, 5), (6, 6, 1)])
def test_invariant_examples(tp, k, n):
    inv = chain_invariants(tp)
    assert (inv.k, inv.n) == (k, n)


def test_irrational_is_aperiodic():
    assert not chain_invariants(2 * math.sqrt(2)).periodic
    assert chain_invariants(2.5).periodic          # floats equal to p/q are read exactly


def test_interlacing_examples():
    a, b = Chain("5/2", 0.1), Chain("5/2", 2.0)
    assert perfectly_interlaced(a, b)
    assert not perfectly_interlaced(Chain(3), Chain("5/2"))
    d = perfectly_interlaced(Chain(2 * math.sqrt(2), 0.0), Chain(2 * math.sqrt(2), 1.0))
    assert d.holds and d.approximate
    mixed = perfectly_interlaced(Chain(3), Chain(2 * math.sqrt(2)))
    assert not mixed and "mixed" in mixed.reason


def test_interlacing_is_an_equivalence_on_periodic_chains():
    chains = [chain_invariants(Fraction(p, q)) for p in range(2, 13) for q in range(1, p // 2 + 1)
              if math.gcd(p, q) == 1]
    rel = {(i, j): bool(perfectly_interlaced(a, b))
           for (i, a), (j, b) in product(enumerate(chains), repeat=2)}
    idx = range(len(chains))
    assert all(rel[i, i] for i in idx)
    assert all(rel[i, j] == rel[j, i] for i in idx for j in idx)
    assert all(rel[i, k] for i in idx for j in idx for k in idx if rel[i, j] and rel[j, k])


def test_chain_directions_step_by_pi():
    c = Chain("7/3", 0.25)
    d = c.directions(50)
    for i in range(49):
        step = (d[i + 1] - d[i]) % c.theta
        assert math.isclose(step, math.pi, abs_tol=1e-9)
        assert math.isclose(d[i], c.direction(i), abs_tol=1e-9)
    with pytest.raises(ValueError):
        Chain("3/2")


def test_estimate_on_octagon(octagon):
    est = estimate_cone_angle_from_surface(octagon, 0, 10)
    assert all(iv.contains(6) for iv in est.intervals)
    assert [iv.width_pi for iv in est.intervals] == [Fraction(1, n) for n in range(1, 11)]
    one = estimate_cone_angle_from_surface(octagon, 0, 1)
    assert one.intervals[0].width_pi == 1


def test_estimate_avoids_excluded_directions(octagon):
    est = estimate_cone_angle_from_surface(octagon, 0, 5, excluded_directions=[0.0, math.pi / 4])
    d = est.chain.directions(sweep_count(6, 5) + 1)
    for x in (0.0, math.pi / 4):
        diff = np.abs((d - x + est.chain.theta / 2) % est.chain.theta - est.chain.theta / 2)
        assert diff.min() > 1e-9


def test_synthetic_five_halves_shrinks():
    chain = Chain("5/2", 0.3)
    ivs = [cone_angle_bounds(chain, n) for n in range(1, 51)]
    assert all(iv.contains(Fraction(5, 2)) for iv in ivs)
    assert [iv.width_pi for iv in ivs] == [Fraction(1, n) for n in range(1, 51)]
