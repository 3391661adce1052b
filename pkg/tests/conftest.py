"""Shared strategies and independent evaluation oracles.

The oracles evaluate functions point by point from their raw pieces with a
plain linear scan, so they share no refinement or folding code with the
library.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from frameforge.dyadic import LineSet, PeriodicSet
from frameforge.stepfn import PeriodicStepFunction, StepFunction

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

W = 4


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def member(intervals, t) -> bool:
    return any(a <= t < b for a, b in intervals)


def ev(f: StepFunction, t) -> complex:
    """Direct evaluation of a line step function."""
    t = Fraction(t)
    for a, b, v in f.pieces:
        if a <= t < b:
            return v * math.sqrt(2) ** f.half_exp * cmath.exp(2j * math.pi * float(f.char_exp * t))
    return 0j


def pev(m: PeriodicStepFunction, t) -> complex:
    """Direct evaluation of a periodic step function at any real ``t``."""
    t = Fraction(t)
    r = t - math.floor(t)
    for a, b, v in m.pieces:
        if a <= r < b:
            return v * cmath.exp(2j * math.pi * float(m.char_exp * t))
    return 0j


def grid(lo, hi, step_exp: int):
    """Points ``k * 2**-step_exp`` in ``[lo, hi)``."""
    n = 1 << step_exp
    k0, k1 = math.ceil(Fraction(lo) * n), math.ceil(Fraction(hi) * n)
    return [Fraction(k, n) for k in range(k0, k1)]


def truncated_product(m0: PeriodicStepFunction, xi, depth: int = 20) -> float:
    out = 1.0
    for j in range(1, depth + 1):
        out *= abs(pev(m0, Fraction(xi) / 2 ** j))
    return out


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------

def _sorted_points(draw, lo, hi, depth, max_pts):
    n = 1 << depth
    ks = draw(st.lists(st.integers(int(lo * n), int(hi * n)), min_size=0, max_size=max_pts, unique=True))
    return [Fraction(k, n) for k in sorted(ks)]


@st.composite
def linesets(draw, lo=-2, hi=2, depth=5, max_intervals=4, window_exp=W):
    pts = _sorted_points(draw, lo, hi, depth, 2 * max_intervals)
    if len(pts) % 2:
        pts = pts[:-1]
    return LineSet(tuple(zip(pts[::2], pts[1::2])), window_exp)


@st.composite
def psets(draw, depth=5, max_intervals=4):
    pts = _sorted_points(draw, 0, 1, depth, 2 * max_intervals)
    if len(pts) % 2:
        pts = pts[:-1]
    return PeriodicSet(tuple(zip(pts[::2], pts[1::2])))


values = st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False).map(
    lambda z: complex(round(z.real, 3), round(z.imag, 3)))
sign_values = st.sampled_from([1, -1, 1j, -1j])


@st.composite
def steps(draw, lo=-2, hi=2, depth=4, max_pieces=5, vals=values, char=False):
    pts = _sorted_points(draw, lo, hi, depth, max_pieces + 1)
    pieces = [(a, b, draw(vals)) for a, b in zip(pts, pts[1:])]
    c = draw(st.sampled_from([0, Fraction(1, 2), 1, Fraction(-1, 4)])) if char else 0
    return StepFunction(tuple(pieces), Fraction(c), W)


@st.composite
def psteps(draw, depth=4, vals=values, full=True):
    n = 1 << depth
    cuts = sorted(set(draw(st.lists(st.integers(1, n - 1), max_size=5))))
    pts = [Fraction(0)] + [Fraction(k, n) for k in cuts] + [Fraction(1)]
    return PeriodicStepFunction(tuple((a, b, draw(vals)) for a, b in zip(pts, pts[1:])))


@st.composite
def sign_psteps(draw, depth=3):
    """Random ±1-valued step functions on the grid of mesh ``2**-depth``."""
    n = 1 << depth
    return PeriodicStepFunction(tuple((Fraction(k, n), Fraction(k + 1, n), draw(st.sampled_from([1, -1])))
                                      for k in range(n)))


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def shannon():
    return StepFunction(((Fraction(-1, 2), Fraction(1, 2), 1),), Fraction(0), W)


@pytest.fixture
def phi1():
    return StepFunction(((Fraction(-1, 4), Fraction(1, 4), 1),), Fraction(0), W)


@pytest.fixture
def psi0():
    return StepFunction(((Fraction(-1), Fraction(-1, 2), 1), (Fraction(1, 2), Fraction(1), 1)), Fraction(0), W)


@pytest.fixture
def psi1():
    return StepFunction(((Fraction(-1, 2), Fraction(-1, 4), 1), (Fraction(1, 4), Fraction(1, 2), 1)),
                        Fraction(0), W)
