"""Unimodular step functions: the groups of periodic and admissible phases.

Elements of the periodic group are plain :class:`PeriodicStepFunction`
values of modulus one on ``[0, 1)``.  Admissible phases on the line are
:class:`StepFunction` values of modulus one on the whole window whose
quotient ``alpha(2 xi) / alpha(xi)`` is 1-periodic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .checks import Check, VerificationError, Witness, worst
from .dyadic import DEFAULT_WINDOW_EXP, LineSet, PeriodicSet, dyadic, pow2
from .stepfn import (
    VALUE_TOL,
    PeriodicStepFunction,
    StepFunction,
    _combine,
    fold_consistent,
    mul_periodic,
)

Phase = Union[StepFunction, PeriodicStepFunction]


def as_periodic(value, name: str = "phase") -> PeriodicStepFunction:
    """Coerce ``None`` (meaning 1), a complex constant, or a periodic function."""
    if value is None:
        return PeriodicStepFunction.constant(1)
    if isinstance(value, PeriodicStepFunction):
        return value
    if isinstance(value, (int, float, complex)):
        return PeriodicStepFunction.constant(complex(value))
    raise TypeError(f"{name} must be a periodic step function or a constant")


def is_unimodular(f: Phase, tol: float = VALUE_TOL,
                  domain: Optional[Union[LineSet, PeriodicSet]] = None) -> Check:
    """``|f| = 1`` on its declared domain (default: window or ``[0, 1)``)."""
    if isinstance(f, StepFunction):
        dom = LineSet.window(f.window_exp) if domain is None else domain
        missing = dom.difference(f.support())
        pieces = [(a, b, abs(v)) for a, b, v in f.scaled_pieces()]
    else:
        dom = PeriodicSet.full() if domain is None else domain
        missing = dom.difference(f.domain())
        pieces = [(a, b, abs(v)) for a, b, v in f.pieces]
    if not missing.is_empty():
        a, b = missing.intervals[0]
        return Check(False, 1.0, Witness(a, (a, b), 1.0, 0.0, "not defined or zero"))
    devs = [(a, b, abs(m - 1)) for a, b, m in pieces if _meets(dom, a, b)]
    dev, where = worst(devs)
    wit = Witness(where[0], where, 1.0, 1.0 + dev) if where and dev > tol else None
    return Check(dev <= tol, dev, wit)


def _meets(dom, a, b) -> bool:
    return any(c < b and a < d for c, d in dom)


def phase_of(m: PeriodicStepFunction) -> PeriodicStepFunction:
    """``m / |m|`` with the convention 1 where ``m`` vanishes."""
    return m.map_values(lambda v: v / abs(v) if v != 0 else 1 + 0j)


# ---------------------------------------------------------------------------
# the delta homomorphism
# ---------------------------------------------------------------------------

def _quotient(num, den):
    if num is None or den is None:
        return None
    return num / den


def delta(alpha: Phase) -> Phase:
    """``delta_alpha(xi) = alpha(2 xi) / alpha(xi)``.

    For a line function the result lives on the half window, where both
    factors are known.  ``alpha`` must not vanish there.
    """
    if isinstance(alpha, PeriodicStepFunction):
        if not alpha.domain().difference(alpha.support()).is_empty() or \
                not PeriodicSet.full().issubset(alpha.domain()):
            raise VerificationError("delta needs a nonvanishing phase on [0, 1)")
        doubled = alpha.dilate_inf(1)
        pieces = _combine(doubled.pieces, alpha.pieces, _quotient)
        return PeriodicStepFunction(tuple(pieces), doubled.char_exp - alpha.char_exp)
    lo, hi = alpha.bounds
    half = LineSet.of((lo / 2, hi / 2), window_exp=alpha.window_exp)
    if not half.issubset(alpha.support()):
        raise VerificationError("delta needs alpha nonvanishing on the half window")
    doubled = alpha.dilate_inf(1)
    pieces = _combine(doubled.pieces, alpha.restrict(half).pieces, _quotient)
    return StepFunction(tuple(pieces), alpha.char_exp, alpha.window_exp, 0)


def delta_periodic(alpha: StepFunction, exclude_radius=0, tol: float = VALUE_TOL):
    """Fold ``delta(alpha)`` onto ``[0, 1)`` if it is 1-periodic.

    Pieces inside ``(-exclude_radius, exclude_radius)`` are ignored.  Returns
    ``(periodic_function, None)`` or ``(None, witness)``.
    """
    d = delta(alpha)
    r = dyadic(exclude_radius)
    pieces = d.scaled_pieces()
    if r > 0:
        keep = LineSet.window(d.window_exp).difference(LineSet.of((-r, r), window_exp=d.window_exp))
        pieces = d.restrict(keep).scaled_pieces()
    m, conflict = fold_consistent(pieces, d.char_exp, tol)
    if m is None:
        xi, v1, v2 = conflict
        return None, Witness(xi, None, v1, v2, "delta differs across integer translates")
    return m, None


def is_in_M(alpha: Phase, exclude_radius=0, tol: float = VALUE_TOL) -> Check:
    """Whether ``alpha`` is unimodular with a 1-periodic ``delta``."""
    if isinstance(alpha, PeriodicStepFunction):
        return is_unimodular(alpha, tol)
    unit = is_unimodular(alpha, tol)
    if not unit:
        return unit
    m, wit = delta_periodic(alpha, exclude_radius, tol)
    if m is None:
        return Check(False, abs(wit.expected - wit.got), wit, "delta is not 1-periodic")
    if not PeriodicSet.full().issubset(m.domain()):
        gap = PeriodicSet.full().difference(m.domain()).intervals[0]
        return Check(False, 1.0, Witness(gap[0], gap), "delta not determined on [0, 1)")
    return Check(True)


# ---------------------------------------------------------------------------
# constructive inverse of delta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaBuild:
    """Output of :func:`build_alpha`.

    ``delta(alpha) = nu`` holds on the window outside the ball of radius
    ``inner_radius``, where ``alpha`` is set to 1.
    """

    alpha: StepFunction
    inner_radius: Fraction
    inward_octaves: int
    outward_octaves: int


def _check_power_of_two(N: Fraction) -> None:
    if N <= 0 or N.numerator & (N.numerator - 1) or N.denominator & (N.denominator - 1) \
            or (N.numerator != 1 and N.denominator != 1):
        raise ValueError(f"N = {N} is not a power of two")


def default_inward_octaves(window_exp: int, *fns) -> int:
    finest = max([0] + [f.finest_exp() for f in fns])
    return window_exp + finest + 2


def build_alpha(nu: PeriodicStepFunction, alpha0=1, N=1,
                window_exp: int = DEFAULT_WINDOW_EXP,
                inward_octaves: Optional[int] = None) -> AlphaBuild:
    """Solve ``delta(alpha) = nu`` octave by octave from a seed on ``I_0``.

    ``I_0 = [-N, -N/2) ∪ [N/2, N)``.  Outward octaves use
    ``alpha(xi) = nu(xi/2) alpha(xi/2)``; inward octaves use
    ``alpha(xi) = alpha(2 xi) / nu(xi)``.  After ``inward_octaves`` inward
    steps the remaining ball around 0 is set to 1.

    Parameters
    ----------
    nu : PeriodicStepFunction
        Unimodular on ``[0, 1)`` and without a character.
    alpha0 : StepFunction or complex
        Unimodular seed on ``I_0``; a constant means that constant on ``I_0``.
    N : dyadic power of two
        Outer radius of the seed octave, at most ``2**window_exp``.
    """
    N = dyadic(N)
    _check_power_of_two(N)
    W = pow2(window_exp)
    if N > W:
        raise ValueError("seed octave leaves the window")
    if not is_unimodular(nu):
        raise VerificationError("nu must be unimodular on [0, 1)")
    if nu.char_exp:
        raise VerificationError("nu must not carry a character")
    I0 = LineSet.symmetric(N / 2, N, window_exp)
    if isinstance(alpha0, StepFunction):
        if alpha0.window_exp != window_exp or alpha0.char_exp:
            raise VerificationError("alpha0 must share the window and carry no character")
        seed = alpha0.restrict(I0)
        if not is_unimodular(seed, domain=I0):
            raise VerificationError("alpha0 must be unimodular on I_0")
    else:
        seed = StepFunction.indicator(I0, complex(alpha0))
        if abs(abs(complex(alpha0)) - 1) > VALUE_TOL:
            raise VerificationError("alpha0 must be unimodular")
    if inward_octaves is None:
        inward_octaves = default_inward_octaves(window_exp, nu, seed)

    pieces = list(seed.pieces)
    cur, outward, radius = seed, 0, N
    while 2 * radius <= W:
        cur = mul_periodic(nu, cur).dilate_inf(-1)
        pieces.extend(cur.pieces)
        outward += 1
        radius *= 2
    nu_bar = nu.conjugate().on_line(window_exp)
    cur = seed
    for _ in range(inward_octaves):
        cur = cur.dilate_inf(1).multiply(nu_bar)
        pieces.extend(cur.pieces)
    r = N * pow2(-inward_octaves - 1)
    pieces.append((-r, r, 1 + 0j))
    alpha = StepFunction(tuple(pieces), Fraction(0), window_exp)
    return AlphaBuild(alpha, r, inward_octaves, outward)


def alpha_from_nu(nu: PeriodicStepFunction, window_exp: int = DEFAULT_WINDOW_EXP) -> StepFunction:
    """``alpha(xi) = prod_{j>=1} nu(xi / 2**j)``, an exact solution of ``delta = nu``.

    Requires ``nu = 1`` on a neighbourhood of the integers; the product is
    then finite on the window and ``alpha = 1`` near 0, so ``alpha`` is
    admissible on the whole window with no excluded ball.
    """
    if not is_unimodular(nu) or nu.char_exp:
        raise VerificationError("nu must be a unimodular step function without character")
    eps = _unit_radius(nu)
    if eps == 0:
        raise VerificationError("nu is not 1 near the integers")
    J = window_exp + max(0, -math.floor(math.log2(eps))) + 1
    out = StepFunction.indicator(LineSet.window(window_exp))
    for j in range(1, J + 1):
        out = out.multiply(nu.on_line(window_exp, -j))
    return out


def _unit_radius(m: PeriodicStepFunction, tol: float = VALUE_TOL) -> Fraction:
    """Largest ``e`` with ``m = 1`` on ``[0, e)`` and ``[1 - e, 1)`` (0 if none)."""
    right = Fraction(0)
    for a, b, v in m.pieces:
        if a != right or abs(v - 1) > tol:
            break
        right = b
    left = Fraction(1)
    for a, b, v in reversed(m.pieces):
        if b != left or abs(v - 1) > tol:
            break
        left = a
    return min(right, 1 - left)


# ---------------------------------------------------------------------------
# gauge action on scaling pairs
# ---------------------------------------------------------------------------

def gauge_scaling(phi_hat: StepFunction, m0: PeriodicStepFunction, alpha: Phase,
                  tol: float = VALUE_TOL) -> tuple[StepFunction, PeriodicStepFunction]:
    """``alpha · (phi, m0) = (alpha • phi, delta_alpha m0)``."""
    if isinstance(alpha, PeriodicStepFunction):
        if not is_unimodular(alpha, tol):
            raise VerificationError("alpha is not unimodular")
        d = delta(alpha)
        line = alpha.on_line(phi_hat.window_exp)
    else:
        verdict = is_in_M(alpha, tol=tol)
        if not verdict:
            raise VerificationError("alpha is not admissible: " + (verdict.detail or "not unimodular"),
                                    verdict.witness)
        d, _ = delta_periodic(alpha, tol=tol)
        line = alpha
    phi2 = line.multiply(phi_hat)
    m02 = PeriodicStepFunction(tuple(_combine(d.pieces, m0.pieces, _restricted_product)),
                               d.char_exp + m0.char_exp)
    return phi2, m02


def _restricted_product(d, m):
    if m is None:
        return None
    return (d if d is not None else 0) * m
