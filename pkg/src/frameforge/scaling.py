"""Scaling-function axioms, low-pass extraction and the infinite-product modulus."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .checks import Check, NotReductiveError, ProductError, VerificationError, Witness, worst
from .dyadic import LineSet, PeriodicSet, half_shift_closure, periodize, pow2
from .stepfn import (
    VALUE_TOL,
    PeriodicStepFunction,
    StepFunction,
    _combine,
    fold_consistent,
    mul_periodic,
    periodic_partition,
)


@dataclass(frozen=True)
class ScalingPair:
    """A candidate scaling function with its support sets and verdicts.

    ``m0`` is ``None`` when the two-scale relation could not be solved.
    """

    phi_hat: StepFunction
    m0: Optional[PeriodicStepFunction]
    C: LineSet
    S: PeriodicSet
    S_tilde: PeriodicSet
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.verdicts) and all(self.verdicts.values())


def support_sets(phi_hat: StepFunction) -> tuple[LineSet, PeriodicSet, PeriodicSet]:
    """``(C, S, S~)``: the support, its periodization and half-shift closure."""
    if phi_hat.is_zero():
        raise VerificationError("empty support: the zero function is not a candidate")
    C = phi_hat.support()
    S = periodize(C)
    return C, S, half_shift_closure(S)


def _side_piece(f: StepFunction, positive: bool):
    for a, b, v in f.pieces:
        if positive and a <= 0 < b:
            return a, b, v
        if not positive and a < 0 <= b:
            return a, b, v
    return None


def check_S1(phi_hat: StepFunction, tol: float = VALUE_TOL) -> Check:
    """``|phi_hat| = 1`` on a punctured neighbourhood of 0.

    For a step function this is the same as the dyadic limit
    ``|phi_hat(2**-n xi)| -> 1`` for almost every ``xi``.  On success the
    largest admissible radius is stored in ``data["delta"]``.
    """
    s = phi_hat.scale
    radius = None
    for positive in (True, False):
        p = _side_piece(phi_hat, positive)
        if p is None:
            nxt = [a for a, _, _ in phi_hat.pieces if a > 0] if positive else \
                  [b for _, b, _ in phi_hat.pieces if b < 0]
            edge = (min(nxt) if nxt else phi_hat.bounds[1]) if positive else \
                   (max(nxt) if nxt else phi_hat.bounds[0])
            iv = (Fraction(0), edge) if positive else (edge, Fraction(0))
            return Check(False, 1.0, Witness(iv[0], iv, 1.0, 0.0, "vanishes next to 0"))
        a, b, v = p
        dev = abs(abs(v) * s - 1)
        if dev > tol:
            iv = (Fraction(0), b) if positive else (a, Fraction(0))
            return Check(False, dev, Witness(iv[0], iv, 1.0, abs(v) * s, "modulus differs from 1 next to 0"))
        side = b if positive else -a
        radius = side if radius is None else min(radius, side)
    return Check(True, 0.0, data={"delta": radius})


def _half_window(f: StepFunction) -> LineSet:
    lo, hi = f.bounds
    return LineSet.of((lo / 2, hi / 2), window_exp=f.window_exp)


def _ratio(num, den):
    if den is None:
        return None
    return (num if num is not None else 0) / den


def extract_lowpass(phi_hat: StepFunction, tol: float = VALUE_TOL) -> PeriodicStepFunction:
    """Solve ``phi_hat(2 xi) = m0(xi) phi_hat(xi)`` for a 1-periodic ``m0`` on ``S``.

    Quotients are taken on ``C`` intersected with the half window, the part
    of ``C`` where ``phi_hat(2 xi)`` is known.  They must agree across
    integer translates; ``m0`` keeps explicit zeros on ``S`` minus
    ``C/2 + Z``.

    Raises
    ------
    NotReductiveError
        If ``C/2`` is not inside ``C`` or two translates force different values.
    """
    C, S, _ = support_sets(phi_hat)
    half_C = C.dilate(-1)
    outside = half_C.difference(C)
    if not outside.is_empty():
        a, b = outside.intervals[0]
        raise NotReductiveError("not reductive: C/2 is not contained in C",
                                Witness(a, (a, b), 0, phi_hat(2 * a), "phi_hat(2 xi) != 0 but phi_hat(xi) = 0"))
    core = phi_hat.restrict(_half_window(phi_hat))
    if periodize(core.support()) != S:
        raise VerificationError("window too small: C within the half window does not reach every class mod 1")
    doubled = phi_hat.dilate_inf(1)
    pieces = _combine(doubled.pieces, core.pieces, _ratio)
    m0, conflict = fold_consistent(pieces, doubled.char_exp - phi_hat.char_exp, tol)
    if m0 is None:
        xi, v1, v2 = conflict
        raise NotReductiveError("not reductive: integer translates force different quotients",
                                Witness(xi, None, v1, v2))
    return m0


def check_S2(phi_hat: StepFunction, tol: float = VALUE_TOL) -> tuple[Check, Optional[PeriodicStepFunction]]:
    try:
        m0 = extract_lowpass(phi_hat, tol)
    except NotReductiveError as exc:
        return Check(False, math.inf, exc.witness, str(exc)), None
    return Check(True), m0


def check_S3(m0: PeriodicStepFunction, S: PeriodicSet, tol: float = VALUE_TOL) -> Check:
    """``|m0| <= 1`` on ``S`` and Smith–Barnwell on ``S ∩ (S + 1/2)``."""
    over = [(a, b, abs(v[0]) - 1) for a, b, v in periodic_partition(m0, on=S)]
    dev, where = worst(over)
    if where is not None and dev > tol:
        return Check(False, dev, Witness(where[0], where, 1.0, 1.0 + dev, "|m0| exceeds 1"))
    both = S.intersect(S.shift(Fraction(1, 2)))
    shifted = m0.shift(Fraction(1, 2))
    devs = [(a, b, abs(abs(v[0]) ** 2 + abs(v[1]) ** 2 - 1))
            for a, b, v in periodic_partition(m0, shifted, on=both)]
    dev, where = worst(devs)
    if dev > tol:
        vals = m0.coef(where[0]), shifted.coef(where[0])
        got = abs(vals[0]) ** 2 + abs(vals[1]) ** 2
        return Check(False, dev, Witness(where[0], where, 1.0, got, "Smith-Barnwell fails"))
    return Check(True, dev)


def is_scaling(phi_hat: StepFunction, tol: float = VALUE_TOL) -> ScalingPair:
    """Run the three scaling-function axioms and collect witnesses."""
    C, S, St = support_sets(phi_hat)
    s1 = check_S1(phi_hat, tol)
    s2, m0 = check_S2(phi_hat, tol)
    s3 = check_S3(m0, S, tol) if m0 is not None else Check(False, detail="no low-pass filter")
    verdicts = {"S1": s1.ok, "S2": s2.ok, "S3": s3.ok}
    witnesses = {k: c for k, c in (("S1", s1), ("S2", s2), ("S3", s3)) if not c.ok}
    return ScalingPair(phi_hat, m0, C, S, St, verdicts, witnesses)


def two_scale_residual(phi_hat: StepFunction, m0: PeriodicStepFunction) -> float:
    """``max |phi_hat(2 xi) - m0(xi) phi_hat(xi)|`` over the half window."""
    half = _half_window(phi_hat)
    lhs = phi_hat.dilate_inf(1)
    rhs = mul_periodic(m0, phi_hat).restrict(half)
    if lhs.is_zero() or rhs.is_zero() or lhs.char_exp == rhs.char_exp:
        return lhs.max_diff(rhs)
    raise VerificationError("character mismatch between the two sides")


def unit_radius(m: PeriodicStepFunction, tol: float = VALUE_TOL) -> Fraction:
    """Largest ``e`` with ``|m| = 1`` on ``[0, e)`` and ``[1 - e, 1)`` (0 if none)."""
    right = Fraction(0)
    for a, b, v in m.pieces:
        if a != right or abs(abs(v) - 1) > tol:
            break
        right = b
    left = Fraction(1)
    for a, b, v in reversed(m.pieces):
        if b != left or abs(abs(v) - 1) > tol:
            break
        left = a
    return min(right, 1 - left)


def product_depth(m0: PeriodicStepFunction, window_exp: int, tol: float = VALUE_TOL) -> int:
    """Number of factors after which every further factor is 1 on the window."""
    eps = unit_radius(m0, tol)
    if eps == 0:
        raise ProductError("product does not terminate: |m0| is not 1 next to the integers")
    k = 0
    while pow2(-k) > eps:
        k += 1
    return window_exp + k


def product_modulus(m0: PeriodicStepFunction, window_exp: int, tol: float = VALUE_TOL) -> StepFunction:
    """``xi -> prod_{j>=1} |m0(xi / 2**j)|`` on the window, as an exact finite product."""
    J = product_depth(m0, window_exp, tol)
    mod = m0.modulus()
    out = StepFunction.indicator(LineSet.window(window_exp))
    for j in range(1, J + 1):
        out = out.multiply(mod.on_line(window_exp, -j))
    return out
