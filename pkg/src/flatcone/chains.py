"""Chains of directions at a cone point.

A chain at a cone point of angle theta is the sequence of directions
``phi_i = phi0 + i*pi`` on the circle of circumference theta: each step
turns by exactly pi. Counting how many steps it takes to sweep n times
around the cone brackets theta to within pi/n, and for rational theta/pi
the chain is periodic with a small set of integer invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .rational import MAX_PI_DENOMINATOR

ThetaPi = Union[Fraction, float]

DELTA_CHAIN = 1e-3       # radians
N_CHAIN = 10_000         # terms compared for aperiodic chains
_RECOGNISE_TOL = 1e-12   # relative tolerance for reading a float as p/q


def parse_theta_pi(value) -> ThetaPi:
    """``"5/2"``, ``Fraction(5, 2)``, ``2.5`` or ``(5, 2)`` -> theta as a multiple of pi.

    Floats equal (to 1e-12 relative) to a fraction with denominator at most
    1000 are read as that fraction; other floats stay floats and are
    treated as irrational multiples of pi.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (tuple, list)):
        return Fraction(int(value[0]), int(value[1]))
    if isinstance(value, str):
        return _parse_text(value)
    x = float(value)
    if not math.isfinite(x):
        raise ValueError(f"cone angle must be finite, got {value!r}")
    f = Fraction(x).limit_denominator(MAX_PI_DENOMINATOR)
    if abs(float(f) - x) <= _RECOGNISE_TOL * max(1.0, abs(x)):
        return f
    return x


def _parse_text(text: str) -> ThetaPi:
    """Products of fractions, decimals and ``sqrt(x)``, e.g. ``"2*sqrt(2)"`` or ``"7/2 pi"``."""
    v = text.strip().lower().replace("pi", "").replace(" ", "").rstrip("*")
    if not v:
        raise ValueError(f"empty cone angle {text!r}")
    exact: Fraction | None = Fraction(1)
    approx = 1.0
    for factor in v.split("*"):
        if factor.startswith("sqrt(") and factor.endswith(")"):
            x = math.sqrt(float(Fraction(factor[5:-1])))
            exact = None
        elif "/" in factor or factor.isdigit():
            x = Fraction(factor)
            if exact is not None:
                exact *= x
        else:
            x = float(factor)
            exact = None
        approx *= float(x)
    return exact if exact is not None else parse_theta_pi(approx)


@dataclass(frozen=True)
class Chain:
    """Directions ``phi0 + i*pi`` at a cone point of angle ``theta_pi * pi``."""

    theta_pi: ThetaPi
    phi0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta_pi", parse_theta_pi(self.theta_pi))
        if self.theta_pi < 2:
            raise ValueError(f"cone angle {self.theta_pi}pi is below 2pi")
        object.__setattr__(self, "phi0", float(self.phi0) % self.theta)

    @property
    def theta(self) -> float:
        return float(self.theta_pi) * math.pi

    @property
    def exact(self) -> bool:
        return isinstance(self.theta_pi, Fraction)

    def direction(self, i: int) -> float:
        if self.exact:
            return float((Fraction(self.phi0 / math.pi) + i) % self.theta_pi) * math.pi
        return math.fmod(self.phi0 + i * math.pi, self.theta)

    def directions(self, count: int) -> np.ndarray:
        """The first ``count`` directions, reduced into [0, theta)."""
        i = np.arange(count, dtype=np.float64)
        if self.exact:
            p, q = self.theta_pi.numerator, self.theta_pi.denominator
            # i*pi mod (p/q)pi = ((i*q) mod p) * pi/q, exact in integers
            steps = (np.arange(count, dtype=np.int64) * q) % p
            return np.mod(self.phi0 + steps * (math.pi / q), self.theta)
        return np.mod(self.phi0 + i * math.pi, self.theta)


def _ratio(theta_pi: ThetaPi) -> tuple[int, int]:
    # floats are dyadic rationals; work with their exact value
    if isinstance(theta_pi, Fraction):
        return theta_pi.numerator, theta_pi.denominator
    return float(theta_pi).as_integer_ratio()


def sweep_count(chain: Chain | ThetaPi, n: int) -> int:
    """R(n): steps until the chain has swept n times past its first point.

    Equals ``ceil(n * theta / pi)``; a step landing exactly on the first
    point counts as having passed it.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    tp = chain.theta_pi if isinstance(chain, Chain) else parse_theta_pi(chain)
    a, b = _ratio(tp)
    return -((-n * a) // b)


@dataclass(frozen=True)
class SweepCount:
    theta_pi: ThetaPi
    values: dict[int, int]

    def __getitem__(self, n: int) -> int:
        return self.values[n]


def sweep_counts(chain: Chain | ThetaPi, n_max: int) -> SweepCount:
    tp = chain.theta_pi if isinstance(chain, Chain) else parse_theta_pi(chain)
    return SweepCount(tp, {n: sweep_count(tp, n) for n in range(1, n_max + 1)})


@dataclass(frozen=True)
class AngleInterval:
    """``[lo_pi, hi_pi] * pi``, with exact rational endpoints."""

    n: int
    R: int
    lo_pi: Fraction
    hi_pi: Fraction

    @property
    def lo(self) -> float:
        return float(self.lo_pi) * math.pi

    @property
    def hi(self) -> float:
        return float(self.hi_pi) * math.pi

    @property
    def width_pi(self) -> Fraction:
        return self.hi_pi - self.lo_pi

    def contains(self, theta_pi: ThetaPi) -> bool:
        if not isinstance(theta_pi, float):
            theta_pi = parse_theta_pi(theta_pi)
        a, b = _ratio(theta_pi)
        return (self.lo_pi.numerator * b <= a * self.lo_pi.denominator
                and a * self.hi_pi.denominator <= self.hi_pi.numerator * b)


def cone_angle_bounds(sweep: SweepCount | Chain | ThetaPi | int, n: int) -> AngleInterval:
    """The interval ``[R(n)/n - 1/n, R(n)/n] * pi``, which contains theta.

    ``sweep`` may be a SweepCount, a chain or angle, or R(n) itself.
    """
    if isinstance(sweep, SweepCount):
        R = sweep[n]
    elif isinstance(sweep, int) and not isinstance(sweep, bool):
        R = sweep
    else:
        R = sweep_count(sweep, n)
    return AngleInterval(n, R, Fraction(R - 1, n), Fraction(R, n))


@dataclass(frozen=True)
class ChainInvariants:
    """For periodic chains: ``k`` distinct directions, next one counterclockwise at step ``n``."""

    periodic: bool
    k: int | None = None
    n: int | None = None
    theta_pi: ThetaPi | None = None


def chain_invariants(chain: Chain | ThetaPi) -> ChainInvariants:
    """k = p and n = q^-1 mod p for theta = (p/q) pi; aperiodic for irrational theta."""
    tp = chain.theta_pi if isinstance(chain, Chain) else parse_theta_pi(chain)
    if not isinstance(tp, Fraction):
        return ChainInvariants(False, theta_pi=tp)
    p, q = tp.numerator, tp.denominator
    return ChainInvariants(True, p, pow(q, -1, p) if p > 1 else 0, tp)


@dataclass(frozen=True)
class InterlaceDecision:
    holds: bool
    approximate: bool
    reason: str

    def __bool__(self) -> bool:
        return self.holds


def _circular_nearest(a: np.ndarray, b: np.ndarray, theta: float) -> float:
    """Largest distance from a point of ``a`` to the nearest point of ``b`` on the circle."""
    b = np.sort(b)
    ext = np.concatenate([b[-1:] - theta, b, b[:1] + theta])
    idx = np.searchsorted(ext, a)
    d = np.minimum(np.abs(ext[idx] - a), np.abs(a - ext[idx - 1]))
    return float(d.max())


def perfectly_interlaced(a: Chain | ChainInvariants, b: Chain | ChainInvariants, *,
                         delta: float = DELTA_CHAIN, window: int = N_CHAIN) -> InterlaceDecision:
    """Whether two chains interlace perfectly.

    Periodic chains interlace iff their invariants (k, n) agree. Mixed
    periodicity never interlaces. Two aperiodic chains are compared on
    their first ``window`` directions: each must come within ``delta`` of
    the other's; that answer is flagged approximate.
    """
    ia = a if isinstance(a, ChainInvariants) else chain_invariants(a)
    ib = b if isinstance(b, ChainInvariants) else chain_invariants(b)
    if ia.periodic and ib.periodic:
        same = (ia.k, ia.n) == (ib.k, ib.n)
        return InterlaceDecision(same, False, f"(k, n) = ({ia.k}, {ia.n}) vs ({ib.k}, {ib.n})")
    if ia.periodic != ib.periodic:
        return InterlaceDecision(False, False, "mixed periodicity: one chain periodic, one not")
    if not (isinstance(a, Chain) and isinstance(b, Chain)):
        raise TypeError("aperiodic chains must be given as Chain objects")
    if abs(a.theta - b.theta) > delta:
        return InterlaceDecision(False, True, f"cone angles differ: {a.theta!r} vs {b.theta!r}")
    theta = a.theta
    da, db = a.directions(window), b.directions(window)
    gap = max(_circular_nearest(da, db, theta), _circular_nearest(db, da, theta))
    return InterlaceDecision(gap <= delta, True,
                             f"largest nearest-direction distance {gap:.3g} over {window} terms "
                             f"(tolerance {delta:g})")


@dataclass(frozen=True)
class ConeAngleEstimate:
    cone_point: int
    chain: Chain
    intervals: list[AngleInterval]


def _generic_phi0(theta: float, excluded: Sequence[float], steps: int) -> float:
    golden = (math.sqrt(5) - 1) / 2
    phi0 = golden * theta
    if not excluded:
        return phi0
    ex = np.mod(np.asarray(excluded, dtype=float), theta)
    for attempt in range(1, 1000):
        dirs = np.mod(phi0 + np.arange(steps + 1) * math.pi, theta)
        if _min_distance(ex, dirs, theta) > 1e-9:
            return phi0
        phi0 = math.fmod(phi0 + golden * golden * theta / (attempt + 1), theta)
    raise RuntimeError("could not place the chain away from the excluded directions")


def _min_distance(a: np.ndarray, b: np.ndarray, theta: float) -> float:
    diff = np.abs(a[:, None] - b[None, :]) % theta
    return float(np.minimum(diff, theta - diff).min())


def estimate_cone_angle_from_surface(surface, cone_point: int, n_max: int, *,
                                     phi0: float | None = None,
                                     excluded_directions: Iterable[float] = ()) -> ConeAngleEstimate:
    """Bracket the cone angle of vertex class ``cone_point`` for n = 1..n_max.

    The chain starts at a generic direction; ``excluded_directions`` (cone
    coordinates, e.g. rays through other cone points) are kept off the chain
    for the steps used.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    p = surface.vertex_classes[cone_point]
    tp = p.angle_pi if p.exact else p.angle / math.pi
    theta = p.angle
    excluded = list(excluded_directions)
    steps = sweep_count(tp, n_max)
    if phi0 is None:
        phi0 = _generic_phi0(theta, excluded, steps)
    chain = Chain(tp, phi0)
    return ConeAngleEstimate(cone_point, chain,
                             [cone_angle_bounds(chain, n) for n in range(1, n_max + 1)])
