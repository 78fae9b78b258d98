"""Twist-dependent spectra and exclusion constants.

A twist ``theta`` is held as the fraction ``t = theta / (2 pi)`` reduced to
``[0, 1)``.  When ``t`` is a Fraction every result is an exact Fraction; a
float ``t`` (from a radian input) gives float results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from holokit.exactnum.rational import parse_rational


class StatisticsError(ValueError):
    pass


@dataclass(frozen=True)
class Twist:
    turns: Fraction | float  # theta / (2 pi), in [0, 1)

    def __post_init__(self):
        t = self.turns
        if isinstance(t, (int, Fraction, str)) and not isinstance(t, bool):
            t = parse_rational(t)
            t = t - math.floor(t)
        else:
            t = float(t) % 1.0
            if t == 1.0:  # float modulo can round up to the period
                t = 0.0
        object.__setattr__(self, "turns", t)

    @classmethod
    def from_radians(cls, theta: float) -> Twist:
        return cls(float(theta) / (2 * math.pi))

    @classmethod
    def from_turns(cls, turns) -> Twist:
        return cls(turns)

    @property
    def exact(self) -> bool:
        return isinstance(self.turns, Fraction)

    @property
    def radians(self) -> float:
        return float(self.turns) * 2 * math.pi


BOSON = Twist(Fraction(0))
FERMION = Twist(Fraction(1, 2))


def _twist(theta) -> Twist:
    if isinstance(theta, Twist):
        return theta
    return Twist.from_radians(theta)


def circle_eigenvalue(theta, n: int):
    t = _twist(theta).turns
    return (n + t) ** 2


def circle_spectrum(theta, n_min: int, n_max: int):
    """Eigenvalues ``(n + theta/2pi)^2`` for ``n_min <= n <= n_max``.

    Returns ``(levels, ground)`` where ``levels`` is a list of
    ``(n, eigenvalue)`` and ``ground`` is ``(minimisers, value)`` for the
    minimum over all integers (not just the window).
    """
    if n_min > n_max:
        raise ValueError("n_min must not exceed n_max")
    tw = _twist(theta)
    levels = [(n, (n + tw.turns) ** 2) for n in range(n_min, n_max + 1)]
    t = tw.turns
    # with t in [0, 1) the minimum over Z sits at n = 0 or n = -1
    cands = {0: t * t, -1: (t - 1) ** 2}
    low = min(cands.values())
    minimisers = tuple(sorted(n for n, v in cands.items() if v == low))
    return levels, (minimisers, low)


def alpha(theta):
    """Fractional angular momentum ``min_n |n + theta/2pi|``.

    Returns ``(alpha, n)`` with the smallest minimising ``n`` on ties.
    """
    t = _twist(theta).turns
    up, down = t, 1 - t  # |0 + t| and |-1 + t|
    if down <= up:
        return down, -1
    return up, 0


@dataclass(frozen=True)
class StatisticsSpec:
    d: int
    theta: Twist

    def __post_init__(self):
        if self.d not in (2, 3):
            raise StatisticsError(f"dimension must be 2 or 3, got {self.d}")
        tw = _twist(self.theta)
        object.__setattr__(self, "theta", tw)
        if self.d == 3 and tw.turns not in (0, Fraction(1, 2)):
            raise StatisticsError(
                "in three dimensions exchange statistics are only bosonic (theta = 0) "
                "or fermionic (theta = pi)"
            )


def hardy_constant(spec: StatisticsSpec):
    """``(d-2)^2/4 + (d-1) * min_{n even} |n + theta/pi|^2``."""
    d = spec.d
    u = 2 * spec.theta.turns  # theta / pi, in [0, 2)
    # nearest even integers to -u are 0 and -2
    m = min(u * u, (u - 2) ** 2)
    first = Fraction((d - 2) ** 2, 4) if spec.theta.exact else (d - 2) ** 2 / 4
    return first + (d - 1) * m
