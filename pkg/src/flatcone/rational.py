"""Angles as exact rational multiples of pi."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

EPS_ANGLE = 1e-9
# Largest denominator tried when recognising a float angle as a rational
# multiple of pi. Small enough that a random angle matches with
# probability ~1e-4 at EPS_ANGLE.
MAX_PI_DENOMINATOR = 1000

FractionLike = Union[Fraction, int, str]


def as_fraction(value: FractionLike | tuple[int, int] | list[int]) -> Fraction:
    if isinstance(value, (tuple, list)):
        num, den = value
        return Fraction(int(num), int(den))
    return Fraction(value)


def pi_fraction(angle: float, tol: float = EPS_ANGLE,
                max_denominator: int = MAX_PI_DENOMINATOR) -> Fraction | None:
    """Return ``f`` with ``f*pi == angle`` within ``tol`` radians, else None."""
    ratio = angle / math.pi
    guess = Fraction(ratio).limit_denominator(max_denominator)
    if abs(float(guess) * math.pi - angle) <= tol:
        return guess
    return None


def cos_sin_pi(frac: Fraction) -> tuple[float, float]:
    """cos and sin of ``frac*pi``; exact at quarter turns."""
    f = frac % 2
    if f.denominator <= 2:
        return {
            Fraction(0): (1.0, 0.0),
            Fraction(1, 2): (0.0, 1.0),
            Fraction(1): (-1.0, 0.0),
            Fraction(3, 2): (0.0, -1.0),
        }[f]
    a = float(f) * math.pi
    return math.cos(a), math.sin(a)


@dataclass(frozen=True, order=True)
class RotationClass:
    """A rotation by ``numerator/denominator * pi``, reduced into [0, 2)."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        f = Fraction(self.numerator, self.denominator) % 2
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    @classmethod
    def of(cls, value: FractionLike | tuple[int, int] | RotationClass) -> RotationClass:
        if isinstance(value, RotationClass):
            return value
        f = as_fraction(value)
        return cls(f.numerator, f.denominator)

    @classmethod
    def zero(cls) -> RotationClass:
        return cls(0, 1)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def radians(self) -> float:
        return float(self.fraction) * math.pi

    def cos_sin(self) -> tuple[float, float]:
        return cos_sin_pi(self.fraction)

    def __add__(self, other: RotationClass) -> RotationClass:
        return RotationClass.of(self.fraction + RotationClass.of(other).fraction)

    def __sub__(self, other: RotationClass) -> RotationClass:
        return RotationClass.of(self.fraction - RotationClass.of(other).fraction)

    def __neg__(self) -> RotationClass:
        return RotationClass.of(-self.fraction)

    def is_identity(self) -> bool:
        return self.numerator == 0

    def is_pm_identity(self) -> bool:
        """True for rotations by 0 or pi."""
        return self.denominator == 1

    def __str__(self) -> str:
        return pi_text(self.fraction)

    def to_json(self) -> list[int]:
        return [self.numerator, self.denominator]


def pi_text(frac: Fraction) -> str:
    """``Fraction(13, 3)`` -> ``'13pi/3'``."""
    if frac == 0:
        return "0"
    num = {1: "", -1: "-"}.get(frac.numerator, str(frac.numerator))
    return f"{num}pi" if frac.denominator == 1 else f"{num}pi/{frac.denominator}"


def format_pi(frac: Fraction | None, fallback: float | None = None) -> str:
    if frac is None:
        return f"{fallback!r}"
    return f"{frac.numerator}/{frac.denominator}" if frac.denominator != 1 else f"{frac.numerator}"
