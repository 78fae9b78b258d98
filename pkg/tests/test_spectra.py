from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holokit.spectra import (
    BOSON,
    FERMION,
    StatisticsError,
    StatisticsSpec,
    Twist,
    alpha,
    circle_eigenvalue,
    circle_spectrum,
    hardy_constant,
)

F = Fraction
SWEEP = np.linspace(0.0, 2 * math.pi, 100, endpoint=False)
turns = st.fractions(min_value=-3, max_value=3, max_denominator=64)


def brute_alpha(t):
    return min(abs(n + t) for n in range(-5, 6))


def test_circle_examples():
    _, (ns, low) = circle_spectrum(BOSON, -3, 3)
    assert (ns, low) == ((0,), 0)
    _, (ns, low) = circle_spectrum(FERMION, -3, 3)
    assert (ns, low) == ((-1, 0), F(1, 4))
    assert circle_eigenvalue(Twist(F(1, 4)), 0) == F(1, 16)
    levels, _ = circle_spectrum(Twist(F(1, 4)), -1, 1)
    assert levels == [(-1, F(9, 16)), (0, F(1, 16)), (1, F(25, 16))]
    with pytest.raises(ValueError):
        circle_spectrum(BOSON, 2, 1)


def test_alpha_examples():
    assert alpha(Twist(0)) == (0, 0)
    assert alpha(Twist(F(1, 4))) == (F(1, 4), 0)
    assert alpha(FERMION) == (F(1, 2), -1)
    assert alpha(math.pi / 2)[0] == pytest.approx(0.25, abs=1e-12)


def test_hardy_constants():
    cases = {(2, 0): 0, (2, F(1, 2)): 1, (3, 0): F(1, 4), (3, F(1, 2)): F(9, 4)}
    for (d, t), c in cases.items():
        assert hardy_constant(StatisticsSpec(d, Twist(t))) == c


def test_three_dimensions_only_bosons_or_fermions():
    with pytest.raises(StatisticsError):
        StatisticsSpec(3, Twist(F(1, 4)))
    with pytest.raises(StatisticsError):
        StatisticsSpec(4, BOSON)


def test_twist_reduction():
    assert Twist(F(5, 4)).turns == F(1, 4)
    assert Twist(F(-1, 4)).turns == F(3, 4)
    assert Twist("3/2").turns == F(1, 2)
    assert Twist.from_radians(2 * math.pi).turns == 0
    assert Twist(F(1, 4)).exact and not Twist(0.25).exact


@given(turns)
def test_exact_alpha_matches_bruteforce(t):
    a, n = alpha(Twist(t))
    tw = Twist(t).turns
    assert a == brute_alpha(tw) and abs(n + tw) == a
    assert 0 <= a <= F(1, 2)


@given(turns)
def test_exact_cross_consistency(t):
    tw = Twist(t)
    _, (ns, low) = circle_spectrum(tw, -2, 2)
    assert alpha(tw)[0] ** 2 == low
    assert min(n for n in range(-5, 6) if (n + tw.turns) ** 2 == low) == ns[0]


@given(turns)
def test_exact_periodicity_and_reflection(t):
    assert alpha(Twist(t)) == alpha(Twist(t + 1))
    assert alpha(Twist(t))[0] == alpha(Twist(1 - t))[0]
    assert hardy_constant(StatisticsSpec(2, Twist(t))) == hardy_constant(StatisticsSpec(2, Twist(t + 3)))


@pytest.mark.parametrize("theta", SWEEP)
def test_float_sweep(theta):
    a, _ = alpha(theta)
    assert abs(a - alpha(theta + 2 * math.pi)[0]) <= 1e-12
    assert abs(a - alpha(2 * math.pi - theta)[0]) <= 1e-12
    _, (_, low) = circle_spectrum(theta, -3, 3)
    assert abs(a * a - low) <= 1e-12
    c = hardy_constant(StatisticsSpec(2, Twist.from_radians(theta)))
    assert abs(c - hardy_constant(StatisticsSpec(2, Twist.from_radians(theta + 2 * math.pi)))) <= 1e-12
    if theta > 0:
        assert c > 0


@given(turns.filter(lambda t: t.denominator > 1))
def test_exclusion_constant_positive_away_from_bosons(t):
    assert hardy_constant(StatisticsSpec(2, Twist(t))) > 0
