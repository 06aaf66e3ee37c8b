"""Minimal directed-rounding interval arithmetic on 64-bit floats.

Every operation widens its result outward by one ulp on each side, so any
enclosure produced here is sound under round-to-nearest hardware arithmetic.
Only the operations needed for polynomial sign certification are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(x: float) -> "Interval":
        return Interval(x, x)

    @staticmethod
    def from_int(n: int) -> "Interval":
        x = float(n)
        if int(x) == n:
            return Interval(x, x)
        return Interval(_down(x), _up(x))

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval") -> "Interval":
        return self + (-other)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(_down(min(products)), _up(max(products)))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def horner(coeffs: list[Interval], x: Interval) -> Interval:
    """Interval Horner evaluation of sum_k coeffs[k] * x^k."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc
