"""Wavelet synthesis and the frame identities used to verify it.

All infinite sums over scales become finite because supports are bounded
and, where needed, bounded away from 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .checks import Check, DegenerateError, NonAnnularError, VerificationError, Witness, worst
from .dyadic import LineSet, fold_to_octave, periodize, pow2
from .scaling import ScalingPair
from .stepfn import (
    SUM_TOL,
    VALUE_TOL,
    PeriodicStepFunction,
    StepFunction,
    _accumulate,
    _combine,
    bracket,
    fold,
    mul_periodic,
    weight,
)
from .unimodular import as_periodic, delta

FUNDAMENTAL = ((Fraction(-2), Fraction(-1)), (Fraction(1), Fraction(2)))


@dataclass(frozen=True)
class Wavelet:
    """``psi_hat`` with the optional triple it was synthesized from."""

    psi_hat: StepFunction
    phi_hat: Optional[StepFunction] = None
    m0: Optional[PeriodicStepFunction] = None
    m1: Optional[PeriodicStepFunction] = None

    @property
    def has_provenance(self) -> bool:
        return self.phi_hat is not None and self.m1 is not None


@dataclass(frozen=True)
class FrameReport:
    """Outcome of the Calderón and ``t_q`` tests."""

    calderon_max_dev: float
    tq_max_dev: dict
    vacuous_q: tuple
    parseval_verdict: bool
    witnesses: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ParsevalTest:
    total: float
    norm_sq: float
    deviation: float
    scales: tuple[int, int]
    missing_scales: tuple = ()


@dataclass(frozen=True)
class GaugeResult:
    psi_direct: StepFunction
    psi_dual: StepFunction
    max_dev: float
    modulus_dev: float


@dataclass(frozen=True)
class SemiorthogonalityReport:
    ok: bool
    max_cross: float
    cross_witness: Optional[tuple[int, int]]
    d_binary: bool
    d_dev: float


def _as_wavelet(psi: Union[Wavelet, StepFunction]) -> Wavelet:
    return psi if isinstance(psi, Wavelet) else Wavelet(psi)


def synthesize(phi: Union[ScalingPair, StepFunction], m1: PeriodicStepFunction,
               m0: Optional[PeriodicStepFunction] = None) -> Wavelet:
    """``psi_hat(xi) = m1(xi/2) phi_hat(xi/2)``, supported in ``2C``.

    The part of ``2C`` beyond the window is dropped.
    """
    if isinstance(phi, ScalingPair):
        m0 = phi.m0 if m0 is None else m0
        phi = phi.phi_hat
    W = phi.window_exp
    psi = m1.on_line(W, -1).multiply(phi.dilate_inf(-1, clip=True))
    if psi.is_zero():
        raise DegenerateError("degenerate high-pass: the synthesized wavelet vanishes")
    return Wavelet(psi, phi, m0, m1)


def annulus(f: StepFunction) -> tuple[Fraction, Fraction]:
    """``(min |xi|, max |xi|)`` over the support; error if it touches 0."""
    if f.is_zero():
        raise NonAnnularError("empty support")
    inner = None
    outer = Fraction(0)
    for a, b, _ in f.pieces:
        if a <= 0 < b or b == 0:
            raise NonAnnularError("non-annular support: touches 0",
                                  Witness(Fraction(0), (a, b)))
        near = a if a > 0 else -b
        inner = near if inner is None else min(inner, near)
        outer = max(outer, b if a > 0 else -a)
    return inner, outer


def _octave_sum(psi: StepFunction):
    """Pieces of ``sum_j |psi_hat(2**j xi)|**2`` on the fundamental octaves."""
    annulus(psi)
    items = []
    for a, b, v in psi.abs_sq().scaled_pieces():
        for x, y in fold_to_octave(a, b):
            items.append((x, y, v.real))
    summed = [(a, b, v.real) for a, b, v in _accumulate(items)]
    covered = LineSet(tuple((a, b) for a, b, _ in summed), max(psi.window_exp, 1))
    fundamental = LineSet(FUNDAMENTAL, covered.window_exp)
    gaps = [(a, b, 0.0) for a, b in fundamental.difference(covered)]
    return sorted(summed + gaps, key=lambda p: p[0])


def calderon(psi: Union[Wavelet, StepFunction], tol: float = VALUE_TOL) -> Check:
    """Deviation of ``sum_j |psi_hat(2**j xi)|**2`` from 1.

    The sum is returned in ``data["octave_sum"]`` as pieces on
    ``[-2, -1) ∪ [1, 2)``.
    """
    psi = _as_wavelet(psi).psi_hat
    pieces = _octave_sum(psi)
    dev, where = worst((a, b, abs(v - 1)) for a, b, v in pieces)
    wit = None
    if where is not None and dev > tol:
        got = next(v for a, b, v in pieces if a == where[0])
        wit = Witness(where[0], where, 1.0, got)
    return Check(dev <= tol, dev, wit, data={"octave_sum": pieces})


def tq_function(psi: Union[Wavelet, StepFunction], q: int) -> tuple[StepFunction, int]:
    """``t_q`` as a step function, and the number of contributing scales.

    Only scales with ``2**j |q|`` below the support diameter can pair two
    nonzero values, so the sum over ``j >= 0`` is finite.
    """
    psi = _as_wavelet(psi).psi_hat
    if q % 2 == 0:
        raise ValueError("q must be odd")
    if psi.is_zero():
        return StepFunction.zero(psi.window_exp), 0
    lo = psi.pieces[0][0]
    hi = psi.pieces[-1][1]
    diam = hi - lo
    total = StepFunction.zero(psi.window_exp)
    j = 0
    while pow2(j) * abs(q) < diam:
        f = psi.dilate_inf(j)
        term = f.multiply(f.shift(q, clip=True).conjugate())
        total = total.add(term)
        j += 1
    return total, j


def tq(psi: Union[Wavelet, StepFunction], q: int, tol: float = VALUE_TOL) -> Check:
    """``max |t_q|`` with a witness piece."""
    t, scales = tq_function(psi, q)
    dev, where = worst((a, b, abs(v)) for a, b, v in t.scaled_pieces())
    wit = Witness(where[0], where, 0.0, t.coef(where[0])) if where and dev > tol else None
    return Check(dev <= tol, dev, wit, data={"scales": scales, "vacuous": scales == 0})


def is_parseval(psi: Union[Wavelet, StepFunction], q_range: int = 9,
                tol: float = VALUE_TOL) -> FrameReport:
    """Calderón condition plus ``t_q = 0`` for odd ``|q| <= q_range``."""
    cal = calderon(psi, tol)
    devs, vacuous, wits = {}, [], {}
    if cal.witness:
        wits["calderon"] = cal.witness
    for q in range(-q_range, q_range + 1):
        if q % 2 == 0:
            continue
        c = tq(psi, q, tol)
        devs[q] = c.max_dev
        if c.data["vacuous"]:
            vacuous.append(q)
        if c.witness:
            wits[f"t{q}"] = c.witness
    ok = cal.ok and all(d <= tol for d in devs.values())
    return FrameReport(cal.max_dev, devs, tuple(vacuous), ok, wits)


def telescoping_sum(psi: Union[Wavelet, StepFunction], tol: float = VALUE_TOL) -> StepFunction:
    """``xi -> sum_{j>=1} |psi_hat(2**j xi)|**2`` on the window.

    Inside the power-of-two radius ``r`` below the support, this equals the
    full dyadic sum, which must then be constant on each side of 0.
    """
    psi = _as_wavelet(psi).psi_hat
    W = psi.window_exp
    if psi.is_zero():
        return StepFunction.zero(W)
    inner, _ = annulus(psi)
    e = math.floor(math.log2(inner))
    while pow2(e) > inner:
        e -= 1
    while pow2(e + 1) <= inner:
        e += 1
    r = pow2(e)
    sides = {}
    for a, b, v in _octave_sum(psi):
        key = a > 0
        if key in sides and abs(sides[key] - v) > tol:
            raise VerificationError("Calderón sum is not constant on a side; the scale sum near 0 is not a step function")
        sides.setdefault(key, v)
    sq = psi.abs_sq()
    outer = LineSet.window(W).difference(LineSet.of((-r, r), window_exp=W))
    total = StepFunction.zero(W)
    for j in range(1, W - e + 1):
        total = total.add(sq.dilate_inf(j).restrict(outer))
    near = StepFunction(((-r, Fraction(0), sides[False]), (Fraction(0), r, sides[True])),
                        Fraction(0), W)
    return total.add(near)


def _diff_check(f: StepFunction, g: StepFunction, tol: float) -> Check:
    diff = _combine(f.scaled_pieces(), g.scaled_pieces(), lambda x, y: (x or 0) - (y or 0))
    dev, where = worst((a, b, abs(v)) for a, b, v in diff)
    wit = Witness(where[0], where, g.coef(where[0]), f.coef(where[0])) if where and dev > tol else None
    return Check(dev <= tol, dev, wit)


def telescoping(phi: Union[ScalingPair, StepFunction], psi: Union[Wavelet, StepFunction],
                tol: float = VALUE_TOL) -> Check:
    """Compare ``sum_{j>=1} |psi_hat(2**j xi)|**2`` with ``|phi_hat(xi)|**2``."""
    if isinstance(phi, ScalingPair):
        phi = phi.phi_hat
    return _diff_check(telescoping_sum(psi, tol), phi.abs_sq(), tol)


def D_psi(psi: Union[Wavelet, StepFunction], tol: float = VALUE_TOL) -> PeriodicStepFunction:
    """``sum_k sum_{j>=1} |psi_hat(2**j (xi + k))|**2``."""
    F = telescoping_sum(psi, tol)
    if F.is_zero():
        return PeriodicStepFunction.zero()
    return fold(F)


def dimension_function(generators: Sequence[StepFunction]) -> PeriodicStepFunction:
    """``sum_i [phi_i, phi_i]``."""
    out = PeriodicStepFunction.zero()
    for g in generators:
        out = out.add(weight(g))
    return out


def _scale_range(f: StepFunction, psi: StepFunction) -> tuple[int, int]:
    a_f, b_f = annulus(f)
    a_p, b_p = annulus(psi)
    return math.floor(math.log2(a_f / b_p)), math.ceil(math.log2(b_f / a_p))


def parseval_on_test(f: StepFunction, psi: Union[Wavelet, StepFunction],
                     j_lo: Optional[int] = None, j_hi: Optional[int] = None) -> ParsevalTest:
    """``sum_j sum_k |<f, psi_jk>|**2`` against ``||f||**2``.

    Scale ``j`` contributes ``∫_0^1 |[2**(j/2) f_hat(2**j .), psi_hat]|**2``.
    Scales whose dilated support misses the support of ``psi_hat`` add
    exactly 0; the needed range is computed and any scale missing from a
    user-given range is reported.
    """
    psi = _as_wavelet(psi).psi_hat
    lo, hi = _scale_range(f, psi)
    j_lo = lo if j_lo is None else j_lo
    j_hi = hi if j_hi is None else j_hi
    missing = tuple(j for j in range(lo, hi + 1) if not j_lo <= j <= j_hi)
    terms = []
    for j in range(j_lo, j_hi + 1):
        h = f.fourier_dilate(j, clip=True)
        terms.append(bracket(h, psi).integrate_abs_sq())
    total = math.fsum(terms)
    n = f.norm_sq()
    return ParsevalTest(total, n, abs(total - n), (j_lo, j_hi), missing)


def gauge_wavelet(psi: Wavelet, mu=None, nu=None, sigma=None,
                  tol: float = VALUE_TOL) -> GaugeResult:
    """``psi_hat'(xi) = nu(xi) (mu sigma)(xi/2) psi_hat(xi)`` with a dual-path check.

    The second path synthesizes from ``(mu • phi, sigma m0, nu(2 .) sigma m1)``.
    ``sigma`` must equal ``delta_mu`` on ``S``.
    """
    if not psi.has_provenance:
        raise VerificationError("gauge_wavelet needs the synthesizing (phi, m1)")
    mu, nu, sigma = as_periodic(mu, "mu"), as_periodic(nu, "nu"), as_periodic(sigma, "sigma")
    S = periodize(psi.phi_hat.support())
    dmu = delta(mu)
    mismatch = sigma.max_diff(dmu, on=S)
    if mismatch > tol:
        raise VerificationError("sigma does not agree with delta(mu) on S")
    W = psi.psi_hat.window_exp
    direct = nu.on_line(W).multiply(mu.multiply(sigma).on_line(W, -1)).multiply(psi.psi_hat)
    phi2 = mul_periodic(mu, psi.phi_hat)
    m1b = nu.dilate_inf(1).multiply(sigma).multiply(psi.m1)
    dual = synthesize(phi2, m1b).psi_hat
    return GaugeResult(direct, dual, direct.max_diff(dual),
                       direct.modulus().max_diff(psi.psi_hat.modulus()))


def semiorthogonality_evidence(psi: Union[Wavelet, StepFunction], J: int = 3, K: int = 4,
                               tol: float = SUM_TOL) -> SemiorthogonalityReport:
    """Cross-scale inner products ``<psi_jk, psi_00>`` and the {0,1} test on ``D_psi``."""
    psi = _as_wavelet(psi).psi_hat
    best, pair = 0.0, None
    for j in range(1, J + 1):
        g = psi.fourier_dilate(-j, clip=True)
        for k in range(-K, K + 1):
            gk = StepFunction(g.pieces, g.char_exp - k * pow2(-j), g.window_exp, g.half_exp)
            ip = abs(gk.inner_product(psi))
            if ip > best:
                best, pair = ip, (j, k)
    D = D_psi(psi)
    d_dev = max((min(abs(v), abs(v - 1)) for _, _, v in D.pieces), default=0.0)
    binary = d_dev <= VALUE_TOL
    return SemiorthogonalityReport(best <= tol and binary, best, pair, binary, d_dev)
