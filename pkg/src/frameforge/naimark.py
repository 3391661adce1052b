"""Maximality, projections of scaling functions and constructive maximalization."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .checks import Check, ProductError, VerificationError, Witness, worst
from .dyadic import LineSet, PeriodicSet, periodize, pow2
from .filterbank import HALF, SQRT_HALF, _safe_sqrt
from .scaling import ScalingPair, product_modulus
from .stepfn import VALUE_TOL, PeriodicStepFunction, StepFunction, mul_periodic, periodic_partition, weight
from .unimodular import as_periodic, is_unimodular, phase_of


@dataclass(frozen=True)
class MaximalizationChoices:
    """Free choices in the maximalization.

    ``nu`` multiplies the forced modulus on ``C/2 + 1/2 + Z``; ``B`` is half
    of ``(S/2)^c`` (``None`` selects its part in ``[0, 1/2)``); ``pair`` is
    the unit vector placed on ``(B, B + 1/2)``.
    """

    nu: Optional[PeriodicStepFunction] = None
    B: Optional[PeriodicSet] = None
    pair: tuple[complex, complex] = (SQRT_HALF, SQRT_HALF)


@dataclass(frozen=True)
class Maximalization:
    phi_star: StepFunction
    m0_star: PeriodicStepFunction
    alpha: Optional[StepFunction]
    tail_mass_bound: float
    changed: bool


@dataclass(frozen=True)
class ProjectionReport:
    """Verdicts of the projection theorem for ``P_E phi*``.

    ``cond1`` uses the pointwise halving form and may be ``None`` when the
    depth cap is hit.  ``cond1_displayed`` is the covering identity with
    ``n >= 1`` decided on the window.  ``reductive`` is ``C/2 ⊆ C``, which
    the three conditions do not imply in general.
    """

    cond1: Optional[bool]
    cond2: bool
    cond3: bool
    reductive: bool
    cond1_displayed: bool
    C: LineSet
    witnesses: dict = field(default_factory=dict)

    @property
    def undecided(self) -> bool:
        return self.cond1 is None

    @property
    def three_conditions(self) -> Optional[bool]:
        if self.cond1 is None:
            return None
        return self.cond1 and self.cond2 and self.cond3

    @property
    def all_true(self) -> Optional[bool]:
        t = self.three_conditions
        return None if t is None else (t and self.reductive)


# ---------------------------------------------------------------------------
# maximality and projection
# ---------------------------------------------------------------------------

def is_maximal(phi_hat: StepFunction, tol: float = 0.0) -> Check:
    """``p_phi > 0`` on every piece of ``[0, 1)``."""
    if phi_hat.is_zero():
        raise VerificationError("the zero function is not a candidate")
    p = weight(phi_hat)
    zero = p.support().complement().union(
        PeriodicSet(tuple((a, b) for a, b, v in p.pieces if abs(v) <= tol)))
    if zero.is_empty():
        return Check(True, data={"min_weight": min(abs(v) for _, _, v in p.pieces)})
    a, b = zero.intervals[0]
    return Check(False, 1.0, Witness(a, (a, b), "> 0", 0.0, "weight vanishes"),
                 data={"zero_set": zero})


def project(phi_star: StepFunction, E: PeriodicSet) -> StepFunction:
    """``P_E phi* = chi_E • phi*``."""
    out = phi_star.restrict(E.lift(phi_star.window_exp))
    if out.is_zero():
        raise VerificationError("empty projection")
    return out


# ---------------------------------------------------------------------------
# projection theorem
# ---------------------------------------------------------------------------

def _punctured_radius(A: LineSet) -> tuple[Fraction, Fraction]:
    """Largest ``(r_minus, r_plus)`` with ``(-r_minus, 0) ∪ (0, r_plus) ⊆ A``."""
    rp = rm = Fraction(0)
    for a, b in A:
        if a <= 0 < b:
            rp = b
        if a < 0 <= b:
            rm = -a
    return rm, rp


def _halving_trace(piece: tuple[Fraction, Fraction], rm: Fraction, rp: Fraction, cap: int):
    """Smallest ``n`` with ``2**-n piece`` inside the stable region, or ``None``."""
    a, b = piece
    for n in range(1, cap + 1):
        s = pow2(-n)
        lo, hi = a * s, b * s
        if (lo >= 0 and hi <= rp) or (hi <= 0 and -lo <= rm):
            return n
    return None


def check_projection_conditions(phi_star: StepFunction, m0_star: PeriodicStepFunction,
                                E: PeriodicSet, depth: Optional[int] = None,
                                tol: float = VALUE_TOL) -> ProjectionReport:
    """Decide the conditions of the projection theorem for ``C = C_{phi*} ∩ (E + Z)``."""
    W = phi_star.window_exp
    C = phi_star.support().intersect(E.lift(W))
    wits: dict = {}
    if C.is_empty():
        return ProjectionReport(False, False, False, False, False, C, {"C": "empty"})
    half = C.dilate(-1)
    rest = C.difference(half)
    if depth is None:
        depth = W + C.finest_exp() + 2

    # cond1: every point off C halves into C/2 and stays there
    rm, rp = _punctured_radius(half)
    cond1: Optional[bool] = True
    if rm == 0 or rp == 0:
        cond1 = False
        if rp == 0:
            nxt = [a for a, _ in half if a > 0]
            iv = (Fraction(0), min(nxt) if nxt else pow2(W))
        else:
            nxt = [b for _, b in half if b < 0]
            iv = (max(nxt) if nxt else -pow2(W), Fraction(0))
        wits["cond1"] = Witness(iv[0], iv, note="C/2 misses a one-sided neighbourhood of 0")
    else:
        for piece in LineSet.window(W).difference(C):
            # stable region is invariant under halving, so sub-pieces are not needed
            n = _halving_trace(piece, rm, rp, depth)
            if n is None:
                cond1 = None
                wits["cond1"] = Witness(piece[0], piece, note=f"undecided at depth {depth}")
                break

    # displayed covering identity with n >= 1, decided on the window
    cover = half
    for n in range(1, depth + 1):
        cover = cover.union(rest.dilate(n, clip=True))
    gaps = LineSet.window(W).difference(cover)
    cond1_displayed = gaps.is_empty()
    if not cond1_displayed:
        wits["cond1_displayed"] = Witness(gaps.intervals[0][0], gaps.intervals[0])

    P_half, P_rest = periodize(half), periodize(rest)
    T2 = P_half.intersect(P_rest.shift(HALF))
    bad = [(a, b, abs(abs(v) - 1)) for a, b, (v,) in periodic_partition(m0_star, on=T2)]
    dev, where = worst(bad)
    cond2 = dev <= tol
    if not cond2:
        wits["cond2"] = Witness(where[0], where, 1.0, 1.0 - dev)
    T3 = P_rest.intersect(P_rest.shift(HALF))
    cond3 = T3.is_empty()
    if not cond3:
        wits["cond3"] = Witness(T3.intervals[0][0], T3.intervals[0])
    outside = half.difference(C)
    reductive = outside.is_empty()
    if not reductive:
        wits["reductive"] = Witness(outside.intervals[0][0], outside.intervals[0])
    return ProjectionReport(cond1, cond2, cond3, reductive, cond1_displayed, C, wits)


# ---------------------------------------------------------------------------
# maximalization
# ---------------------------------------------------------------------------

def _extend_lowpass_total(pair: ScalingPair, choices: MaximalizationChoices) -> PeriodicStepFunction:
    m0 = pair.m0
    A = periodize(pair.C.dilate(-1))
    A2 = A.shift(HALF).difference(A)
    S_half = pair.S.halve()
    if A.union(A2) != S_half:
        raise VerificationError("S/2 is not covered by C/2 + Z and its half shift")
    base = m0.restrict(A)
    nu = as_periodic(choices.nu, "nu")
    if not is_unimodular(nu, domain=A2) or nu.char_exp:
        raise VerificationError("nu must be unimodular on C/2 + 1/2 + Z")
    partner = m0.shift(HALF)
    forced = [(a, b, w * _safe_sqrt(1 - abs(v) ** 2))
              for a, b, (w, v) in periodic_partition(nu, partner, on=A2)]
    known = base.extend(PeriodicStepFunction(tuple(forced)))
    free = S_half.complement()
    B = choices.B if choices.B is not None else free.intersect(PeriodicSet.of((Fraction(0), HALF)))
    if not B.intersect(B.shift(HALF)).is_empty() or B.union(B.shift(HALF)) != free:
        raise VerificationError("B and B + 1/2 must split the complement of S/2")
    p, q = (complex(z) for z in choices.pair)
    if p == 0 or q == 0 or abs(abs(p) ** 2 + abs(q) ** 2 - 1) > VALUE_TOL:
        raise VerificationError("pair must be a unit vector with nonzero entries")
    fill = [(a, b, p) for a, b in B] + [(a, b, q) for a, b in B.shift(HALF)]
    return known.extend(PeriodicStepFunction(tuple(fill)))


def _phase_alpha(phi_hat: StepFunction, mu: PeriodicStepFunction) -> StepFunction:
    """Admissible phase equal to ``phi_hat / |phi_hat|`` on ``C`` with ``delta = mu``.

    Starting from ``C``, each outward frontier ``2F`` minus the known region
    gets ``alpha(xi) = mu(xi/2) alpha(xi/2)``.
    """
    W = phi_hat.window_exp
    window = LineSet.window(W)
    alpha = StepFunction(tuple((a, b, v / abs(v)) for a, b, v in phi_hat.pieces), Fraction(0), W)
    known = alpha.support()
    frontier = alpha
    while not window.issubset(known):
        step = mul_periodic(mu, frontier).dilate_inf(-1, clip=True)
        new_region = step.support().difference(known)
        if new_region.is_empty():
            raise VerificationError("outward filling stalled before covering the window")
        frontier = step.restrict(new_region)
        alpha = alpha.add(frontier)
        known = known.union(new_region)
    return alpha


def maximalize(pair: ScalingPair, choices: Optional[MaximalizationChoices] = None,
               tol: float = VALUE_TOL) -> Maximalization:
    """Build a maximal scaling function whose projection onto ``S`` is ``phi``.

    The filter is completed to satisfy Smith–Barnwell on all of ``[0, 1)``,
    its product modulus is twisted by an admissible phase that matches
    ``phi_hat`` on ``C``, and the mass beyond the window is bounded by
    ``1 - ||phi*||**2`` on the window (translates of ``phi*`` are Bessel
    with bound 1).
    """
    if not pair.ok:
        raise VerificationError("input is not a verified scaling function")
    if pair.phi_hat.char_exp:
        raise VerificationError("maximalize expects a scaling function without character")
    choices = choices or MaximalizationChoices()
    if is_maximal(pair.phi_hat):
        return Maximalization(pair.phi_hat, pair.m0, None, max(0.0, 1 - pair.phi_hat.norm_sq()), False)
    m0s = _extend_lowpass_total(pair, choices)
    W = pair.phi_hat.window_exp
    try:
        modulus = product_modulus(m0s, W, tol)
    except ProductError as exc:  # pragma: no cover - excluded by S1
        raise AssertionError("product must terminate when S1 holds") from exc
    alpha = _phase_alpha(pair.phi_hat, phase_of(m0s))
    phi_star = alpha.multiply(modulus)
    return Maximalization(phi_star, m0s, alpha, max(0.0, 1 - phi_star.norm_sq()), True)


def smith_barnwell_defect(m0: PeriodicStepFunction, on: Optional[PeriodicSet] = None) -> float:
    """``max | |m0(xi)|**2 + |m0(xi + 1/2)|**2 - 1 |`` (missing values count as 0)."""
    on = PeriodicSet.full() if on is None else on
    shifted = m0.shift(HALF)
    return max((abs(abs(x) ** 2 + abs(y) ** 2 - 1)
                for _, _, (x, y) in periodic_partition(m0, shifted, on=on)), default=0.0)


def semiorthogonalize(phi_star: StepFunction, D: PeriodicStepFunction) -> StepFunction:
    """``theta_hat = phi*_hat / sqrt(D)``."""
    S = periodize(phi_star.support())
    vals = []
    for a, b, (v,) in periodic_partition(D, on=S):
        if v.real <= 0 or abs(v.imag) > VALUE_TOL:
            raise VerificationError("semiorthogonalization undefined: D is not positive on S",
                                    Witness(a, (a, b), "> 0", v))
        vals.append((a, b, 1 / math.sqrt(v.real)))
    return mul_periodic(PeriodicStepFunction(tuple(vals)), phi_star)
