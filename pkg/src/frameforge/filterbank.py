"""Low-pass admissibility, filter extension, high-pass construction and unitarity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .checks import Check, ProductError, VerificationError, Witness, worst
from .dyadic import LineSet, PeriodicSet, dilation_gaps, half_shift_closure, periodize
from .scaling import ScalingPair, check_S3, product_depth
from .stepfn import VALUE_TOL, PeriodicStepFunction, _combine, periodic_partition
from .unimodular import as_periodic, is_unimodular

HALF = Fraction(1, 2)
SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class FilterPair:
    """Low- and high-pass filters on ``S~``.

    ``m1`` carries the high-pass phase as its character, so its value is
    ``exp(2 pi i xi) * coef(xi)``.
    """

    m0: PeriodicStepFunction
    m1: PeriodicStepFunction
    C: LineSet
    S: PeriodicSet
    S_tilde: PeriodicSet


def _safe_sqrt(x: float) -> float:
    return math.sqrt(min(1.0, max(0.0, x)))


def check_LP(m0: PeriodicStepFunction, C: LineSet, tol: float = VALUE_TOL) -> dict[str, Check]:
    """The three low-pass conditions for ``C`` plus admissibility of ``C``.

    LP1 is read with the product starting at ``j = 1`` and decided by the
    termination criterion: ``|m0| = 1`` next to the integers.
    """
    S = periodize(C)
    out: dict[str, Check] = {}
    try:
        depth = product_depth(m0, C.window_exp, tol)
        out["LP1"] = Check(True, data={"depth": depth})
    except ProductError as exc:
        out["LP1"] = Check(False, 1.0, Witness(Fraction(0), None, 1.0, abs(m0.coef(0))), str(exc))
    half = C.dilate(-1)
    P_half = periodize(half)
    P_rest = periodize(C.difference(half))
    bad = []
    for a, b, (v,) in periodic_partition(m0, on=P_half):
        if v == 0:
            bad.append((a, b, 1.0))
    for a, b, (v,) in periodic_partition(m0, on=P_rest):
        if abs(v) > tol:
            bad.append((a, b, abs(v)))
    dev, where = worst(bad)
    out["LP2"] = Check(not bad, dev, Witness(where[0], where) if where else None)
    out["LP3"] = check_S3(m0, S, tol)
    gaps = dilation_gaps(C)
    out["admissible"] = Check(gaps.is_empty(), 0.0 if gaps.is_empty() else 1.0,
                              Witness(gaps.intervals[0][0], gaps.intervals[0], note="not covered by dilates of C")
                              if not gaps.is_empty() else None)
    return out


def extend_lowpass(m0_S: PeriodicStepFunction, mu0=None) -> PeriodicStepFunction:
    """Extend ``m0`` from ``S`` to ``S~`` so Smith–Barnwell holds on ``S~``.

    On ``(S + 1/2) \\ S`` the new value is
    ``mu0(xi) * sqrt(1 - |m0(xi + 1/2)|**2)``.
    """
    if m0_S.char_exp:
        raise VerificationError("extend_lowpass expects a filter without character")
    mu0 = as_periodic(mu0, "mu0")
    S = m0_S.domain()
    region = S.shift(HALF).difference(S)
    if region.is_empty():
        return m0_S
    if not is_unimodular(mu0, domain=region) or mu0.char_exp:
        raise VerificationError("mu0 must be unimodular on (S + 1/2) \\ S")
    partner = m0_S.shift(HALF)
    pieces = []
    for a, b, (mu, v) in periodic_partition(mu0, partner, on=region):
        pieces.append((a, b, mu * _safe_sqrt(1 - abs(v) ** 2)))
    return m0_S.extend(PeriodicStepFunction(tuple(pieces)))


def make_highpass(m0: PeriodicStepFunction, mu1=None) -> PeriodicStepFunction:
    """``m1(xi) = mu1(2 xi) exp(2 pi i xi) conj(m0(xi + 1/2))`` on the domain of ``m0``."""
    if m0.char_exp:
        raise VerificationError("make_highpass expects a filter without character")
    mu1 = as_periodic(mu1, "mu1")
    if not is_unimodular(mu1) or mu1.char_exp:
        raise VerificationError("mu1 must be a unimodular 1-periodic step function")
    partner = m0.shift(HALF).conjugate()
    doubled = mu1.dilate_inf(1)
    pieces = _combine(doubled.pieces, partner.pieces,
                      lambda u, v: None if v is None else (u if u is not None else 1) * v)
    return PeriodicStepFunction(tuple(pieces), Fraction(1))


def complete_lowpass(m0: PeriodicStepFunction, pair=(SQRT_HALF, SQRT_HALF),
                     B: Optional[PeriodicSet] = None) -> PeriodicStepFunction:
    """Fill ``[0, 1)`` outside the domain of ``m0`` with a unit pair.

    The free region must be invariant under ``+1/2``; it is split as
    ``B ⊔ (B + 1/2)`` (default ``B`` = its part in ``[0, 1/2)``) and the
    pair ``(p, q)`` is placed on ``B`` and ``B + 1/2``.
    """
    free = m0.domain().complement()
    if free.shift(HALF) != free:
        raise VerificationError("free region is not invariant under +1/2")
    p, q = complex(pair[0]), complex(pair[1])
    if abs(abs(p) ** 2 + abs(q) ** 2 - 1) > VALUE_TOL or p == 0 or q == 0:
        raise VerificationError("pair must be a unit vector with nonzero entries")
    if B is None:
        B = free.intersect(PeriodicSet.of((Fraction(0), HALF)))
    if B.intersect(B.shift(HALF)).is_empty() is False or B.union(B.shift(HALF)) != free:
        raise VerificationError("B and B + 1/2 must split the free region")
    fill = [(a, b, p) for a, b in B] + [(a, b, q) for a, b in B.shift(HALF)]
    return m0.extend(PeriodicStepFunction(tuple(fill), m0.char_exp))


def filter_pair(pair: ScalingPair, mu0=None, mu1=None) -> FilterPair:
    """Standard filter bank on ``S~`` built from a verified scaling pair."""
    if pair.m0 is None:
        raise VerificationError("scaling pair has no low-pass filter")
    m0 = extend_lowpass(pair.m0, mu0)
    m1 = make_highpass(m0, mu1)
    return FilterPair(m0, m1, pair.C, pair.S, pair.S_tilde)


def check_FP(m0: PeriodicStepFunction, m1: PeriodicStepFunction,
             S_tilde: Optional[PeriodicSet] = None, tol: float = VALUE_TOL) -> Check:
    """Unitarity of ``[[m0(xi), m0(xi+1/2)], [m1(xi), m1(xi+1/2)]]`` on ``S~``.

    ``shift`` folds the half-period phase into the coefficients, so each row
    carries one character, which only multiplies the off-diagonal entry of
    ``M M*`` by a unimodular factor.  Stored coefficients therefore suffice.
    ``max_dev`` is ``max |M M* - I|``.
    """
    if S_tilde is None:
        S_tilde = half_shift_closure(m0.domain())
    if m0.char_exp:
        raise VerificationError("check_FP expects a low-pass filter without character")
    m0s, m1s = m0.shift(HALF), m1.shift(HALF)
    devs = []
    for a, b, (x, y, u, v) in periodic_partition(m0, m0s, m1, m1s, on=S_tilde):
        d11 = abs(abs(x) ** 2 + abs(y) ** 2 - 1)
        d22 = abs(abs(u) ** 2 + abs(v) ** 2 - 1)
        d12 = abs(x * u.conjugate() + y * v.conjugate())
        devs.append((a, b, max(d11, d22, d12)))
    dev, where = worst(devs)
    ok = dev <= tol
    return Check(ok, dev, None if ok or where is None else Witness(where[0], where, 0.0, dev, "M M* - I"))

