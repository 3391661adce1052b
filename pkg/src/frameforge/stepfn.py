"""Exact piecewise-constant complex functions, on the line and on the torus.

A line function is ``xi -> exp(2 pi i c xi) * 2**(h/2) * step(xi)`` where the
step part has dyadic breakpoints and complex-double values, ``c`` is a dyadic
character exponent and ``h`` is 0 or 1.  Keeping the ``sqrt(2)`` power apart
from the values keeps norms of unitary dilates exact.

A periodic function is stored through its trace on ``[0, 1)``: its value at
``xi in [0, 1)`` is ``exp(2 pi i c xi) * step(xi)``, extended with period 1.
Periodic pieces may carry explicit zeros; the covered set is the *domain*.
"""
from __future__ import annotations

import cmath
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .dyadic import (
    DEFAULT_WINDOW_EXP,
    LineSet,
    PeriodicSet,
    WindowError,
    dyadic,
    exponent,
    normalize,
    pow2,
)

Piece = tuple[Fraction, Fraction, complex]

VALUE_TOL = 1e-12
SUM_TOL = 1e-10
# sums closer than this to zero are snapped to an exact zero
ZERO_SNAP = 1e-14

_S = math.sqrt(0.5)
_EIGHTHS = (1 + 0j, complex(_S, _S), 1j, complex(-_S, _S),
            -1 + 0j, complex(-_S, -_S), -1j, complex(_S, -_S))


def unit(r) -> complex:
    """``exp(2 pi i r)``, exact for multiples of 1/4 and canonical for 1/8."""
    if isinstance(r, (Fraction, int)):
        r = Fraction(r) % 1
        k = r * 8
        if k.denominator == 1:
            return _EIGHTHS[int(k)]
        return cmath.exp(2j * math.pi * float(r))
    return cmath.exp(2j * math.pi * r)


# ---------------------------------------------------------------------------
# piece-list kernels
# ---------------------------------------------------------------------------

def _canon(pieces: Iterable[Piece], keep_zeros: bool) -> tuple[Piece, ...]:
    out: list[Piece] = []
    for a, b, v in sorted(pieces, key=lambda p: p[0]):
        if not a < b:
            continue
        v = complex(v)
        if not keep_zeros and v == 0:
            continue
        if out and out[-1][1] == a and out[-1][2] == v:
            out[-1] = (out[-1][0], b, v)
        else:
            if out and a < out[-1][1]:
                raise ValueError("pieces overlap")
            out.append((a, b, v))
    return tuple(out)


def _combine(p: Sequence[Piece], q: Sequence[Piece],
             op: Callable[[Optional[complex], Optional[complex]], Optional[complex]]
             ) -> list[Piece]:
    """Apply ``op`` on the common refinement; ``None`` marks an uncovered side."""
    cuts = sorted({t for a, b, _ in p for t in (a, b)} | {t for a, b, _ in q for t in (a, b)})
    out = []
    i = j = 0
    for x, y in zip(cuts, cuts[1:]):
        while i < len(p) and p[i][1] <= x:
            i += 1
        while j < len(q) and q[j][1] <= x:
            j += 1
        vp = p[i][2] if i < len(p) and p[i][0] <= x else None
        vq = q[j][2] if j < len(q) and q[j][0] <= x else None
        if vp is None and vq is None:
            continue
        v = op(vp, vq)
        if v is not None:
            out.append((x, y, v))
    return out


def _accumulate(pieces: Sequence[Piece]) -> list[Piece]:
    """Sum possibly overlapping pieces; summation follows input order."""
    if not pieces:
        return []
    cuts = sorted({t for a, b, _ in pieces for t in (a, b)})
    index = {t: n for n, t in enumerate(cuts)}
    acc: list[Optional[complex]] = [None] * (len(cuts) - 1)
    for a, b, v in pieces:
        for n in range(index[a], index[b]):
            acc[n] = v if acc[n] is None else acc[n] + v
    out = []
    for n, v in enumerate(acc):
        if v is None:
            continue
        if abs(v) < ZERO_SNAP:
            v = 0j
        out.append((cuts[n], cuts[n + 1], v))
    return out


def _clip(pieces: Iterable[Piece], lo: Fraction, hi: Fraction) -> list[Piece]:
    out = []
    for a, b, v in pieces:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 < b2:
            out.append((a2, b2, v))
    return out


def _restrict(pieces: Sequence[Piece], intervals: Sequence[tuple[Fraction, Fraction]]) -> list[Piece]:
    out = []
    for a, b, v in pieces:
        for c, d in intervals:
            if d <= a:
                continue
            if c >= b:
                break
            out.append((max(a, c), min(b, d), v))
    return out


def _scale_x(pieces: Iterable[Piece], s: Fraction) -> list[Piece]:
    return [(a * s, b * s, v) for a, b, v in pieces]


def _fold(pieces: Iterable[Piece], char: Fraction) -> list[Piece]:
    """Cut line pieces at integers and move them into ``[0, 1)``.

    The value moved from ``[k, k+1)`` is multiplied by ``exp(2 pi i c k)`` so
    that the character written on ``[0, 1)`` stays ``exp(2 pi i c xi)``.
    """
    out = []
    for a, b, v in pieces:
        k = math.floor(a)
        while k < b:
            lo, hi = max(a, Fraction(k)), min(b, Fraction(k + 1))
            if lo < hi:
                w = v * unit(char * k) if char else v
                out.append((lo - k, hi - k, w))
            k += 1
    return out


def _lift(pieces: Sequence[Piece], char: Fraction, lo: Fraction, hi: Fraction) -> list[Piece]:
    """Periodic pieces on ``[0, 1)`` copied onto ``[lo, hi)`` with phases."""
    out = []
    for k in range(math.floor(lo), math.ceil(hi)):
        ph = unit(-char * k) if char else 1
        for a, b, v in pieces:
            a2, b2 = max(a + k, lo), min(b + k, hi)
            if a2 < b2:
                out.append((a2, b2, v * ph))
    return out


def _locate(pieces: Sequence[Piece], t) -> Optional[Piece]:
    i = bisect_right(pieces, t, key=lambda p: p[0]) - 1
    if i >= 0 and pieces[i][0] <= t < pieces[i][1]:
        return pieces[i]
    return None


def _phase_at(char: Fraction, t) -> complex:
    if not char:
        return 1
    if isinstance(t, (Fraction, int)):
        return unit(char * t)
    return cmath.exp(2j * math.pi * float(char) * t)


def _mul(a, b):
    return None if a is None or b is None else a * b


def _add(a, b):
    return (a or 0) + (b or 0)


def _sqrt2_scale(h: int) -> float:
    return math.ldexp(1.0, h // 2) * (math.sqrt(2.0) if h % 2 else 1.0)


# ---------------------------------------------------------------------------
# line functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepFunction:
    """``xi -> exp(2 pi i c xi) * 2**(h/2) * step(xi)`` on ``[-2**W, 2**W)``."""

    pieces: tuple[Piece, ...] = ()
    char_exp: Fraction = Fraction(0)
    window_exp: int = DEFAULT_WINDOW_EXP
    half_exp: int = 0

    def __post_init__(self):
        pieces = [(dyadic(a), dyadic(b), complex(v)) for a, b, v in self.pieces]
        h = int(self.half_exp)
        if h % 2 == 0 and h:
            pieces = [(a, b, complex(math.ldexp(v.real, h // 2), math.ldexp(v.imag, h // 2)))
                      for a, b, v in pieces]
            h = 0
        elif h % 2:
            q = (h - 1) // 2
            if q:
                pieces = [(a, b, complex(math.ldexp(v.real, q), math.ldexp(v.imag, q)))
                          for a, b, v in pieces]
            h = 1
        pieces = _canon(pieces, keep_zeros=False)
        w = pow2(self.window_exp)
        if pieces and (pieces[0][0] < -w or pieces[-1][1] > w):
            raise WindowError(f"function leaves the window [-{w}, {w})")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "half_exp", h)
        object.__setattr__(self, "char_exp", dyadic(self.char_exp) if pieces else Fraction(0))
        if not pieces:
            object.__setattr__(self, "half_exp", 0)

    # constructors ---------------------------------------------------------
    @classmethod
    def indicator(cls, A: LineSet, value: complex = 1, char_exp=0) -> "StepFunction":
        return cls(tuple((a, b, value) for a, b in A), dyadic(char_exp), A.window_exp)

    @classmethod
    def zero(cls, window_exp: int = DEFAULT_WINDOW_EXP) -> "StepFunction":
        return cls((), Fraction(0), window_exp)

    @classmethod
    def from_pieces(cls, pieces, char_exp=0, window_exp: int = DEFAULT_WINDOW_EXP,
                    half_exp: int = 0) -> "StepFunction":
        return cls(tuple((dyadic(a), dyadic(b), v) for a, b, v in pieces),
                   dyadic(char_exp), window_exp, half_exp)

    def _like(self, pieces, char_exp=None, half_exp=None, window_exp=None) -> "StepFunction":
        return StepFunction(tuple(pieces),
                            self.char_exp if char_exp is None else char_exp,
                            self.window_exp if window_exp is None else window_exp,
                            self.half_exp if half_exp is None else half_exp)

    # inspection -----------------------------------------------------------
    @property
    def bounds(self) -> tuple[Fraction, Fraction]:
        w = pow2(self.window_exp)
        return -w, w

    @property
    def scale(self) -> float:
        return _sqrt2_scale(self.half_exp)

    def is_zero(self) -> bool:
        return not self.pieces

    def support(self) -> LineSet:
        return LineSet(tuple((a, b) for a, b, _ in self.pieces), self.window_exp)

    def scaled_pieces(self) -> list[Piece]:
        """Pieces with the ``sqrt(2)`` power folded into the values."""
        s = self.scale
        return [(a, b, v * s) for a, b, v in self.pieces]

    def abs_pieces(self) -> list[tuple[Fraction, Fraction, float]]:
        s = self.scale
        return [(a, b, abs(v) * s) for a, b, v in self.pieces]

    def breakpoints(self) -> list[Fraction]:
        return sorted({t for a, b, _ in self.pieces for t in (a, b)})

    def finest_exp(self) -> int:
        return max([exponent(t) for t in self.breakpoints()] + [exponent(self.char_exp)])

    def coef(self, t) -> complex:
        p = _locate(self.pieces, t)
        return p[2] * self.scale if p else 0j

    def __call__(self, t) -> complex:
        p = _locate(self.pieces, t)
        if p is None:
            return 0j
        return p[2] * self.scale * _phase_at(self.char_exp, t)

    def max_abs(self) -> float:
        return max((abs(v) for _, _, v in self.pieces), default=0.0) * self.scale

    # algebra --------------------------------------------------------------
    def _check(self, other: "StepFunction") -> None:
        if not isinstance(other, StepFunction):
            raise TypeError("expected a StepFunction")
        if other.window_exp != self.window_exp:
            raise WindowError("window mismatch")

    def multiply(self, other: "StepFunction") -> "StepFunction":
        self._check(other)
        return self._like(_combine(self.pieces, other.pieces, _mul),
                          self.char_exp + other.char_exp, self.half_exp + other.half_exp)

    def conjugate(self) -> "StepFunction":
        return self._like([(a, b, v.conjugate()) for a, b, v in self.pieces], -self.char_exp)

    def modulus(self) -> "StepFunction":
        return self._like([(a, b, abs(v)) for a, b, v in self.pieces], Fraction(0))

    def abs_sq(self) -> "StepFunction":
        return self._like([(a, b, abs(v) ** 2) for a, b, v in self.pieces], Fraction(0),
                          2 * self.half_exp)

    def scale_by(self, z: complex) -> "StepFunction":
        return self._like([(a, b, v * z) for a, b, v in self.pieces])

    def _aligned(self, other: "StepFunction"):
        if self.is_zero() or other.is_zero():
            return self.pieces, other.pieces, (other if self.is_zero() else self)
        if self.char_exp != other.char_exp:
            raise ValueError("cannot add functions with different characters")
        if self.half_exp == other.half_exp:
            return self.pieces, other.pieces, self
        return self.scaled_pieces(), other.scaled_pieces(), self._like((), half_exp=0)

    def add(self, other: "StepFunction") -> "StepFunction":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        p, q, ref = self._aligned(other)
        out = [(a, b, 0j if abs(v) < ZERO_SNAP else v) for a, b, v in _combine(p, q, _add)]
        return StepFunction(tuple(out), self.char_exp, self.window_exp, ref.half_exp)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return self.multiply(other)
        return self.scale_by(other)

    __rmul__ = __mul__

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return self.add(other)

    def __neg__(self) -> "StepFunction":
        return self.scale_by(-1)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self.add(-other)

    # geometry -------------------------------------------------------------
    def _fit(self, pieces, clip: bool) -> list[Piece]:
        lo, hi = self.bounds
        if clip:
            return _clip(pieces, lo, hi)
        for a, b, _ in pieces:
            if a < lo or b > hi:
                raise WindowError("result leaves the window; pass clip=True to truncate")
        return list(pieces)

    def dilate_inf(self, j: int, clip: bool = False) -> "StepFunction":
        """``xi -> f(2**j xi)``; values are unchanged."""
        s = pow2(-j)
        return self._like(self._fit(_scale_x(self.pieces, s), clip), self.char_exp * pow2(j))

    def fourier_dilate(self, j: int, clip: bool = False) -> "StepFunction":
        """``xi -> 2**(j/2) f(2**j xi)``, the unitary dilation on the Fourier side."""
        g = self.dilate_inf(j, clip)
        return g._like(g.pieces, half_exp=g.half_exp + j)

    def shift(self, q, clip: bool = False) -> "StepFunction":
        """``xi -> f(xi + q)``."""
        q = dyadic(q)
        ph = unit(self.char_exp * q) if self.char_exp else 1
        moved = [(a - q, b - q, v * ph) for a, b, v in self.pieces]
        return self._like(self._fit(moved, clip))

    def restrict(self, E: LineSet) -> "StepFunction":
        """``f * chi_E``."""
        if E.window_exp != self.window_exp:
            raise WindowError("window mismatch")
        return self._like(_restrict(self.pieces, E.intervals))

    # integrals ------------------------------------------------------------
    def norm_sq(self) -> float:
        total = 0.0
        for a, b, v in self.pieces:
            total += (v.real * v.real + v.imag * v.imag) * float(b - a)
        return total * (2 ** self.half_exp)

    def inner_product(self, other: "StepFunction") -> complex:
        """``∫ f conj(g)``; closed-form integral of the net character."""
        self._check(other)
        c = self.char_exp - other.char_exp
        h = self.half_exp + other.half_exp
        total = 0j
        for a, b, v in _combine(self.pieces, other.conjugate().pieces, _mul):
            if c:
                w = 2j * math.pi * float(c)
                total += v * (cmath.exp(w * float(b)) - cmath.exp(w * float(a))) / w
            else:
                total += v * float(b - a)
        return total * _sqrt2_scale(h)

    # comparison -----------------------------------------------------------
    def max_diff(self, other: "StepFunction") -> float:
        """``sup |f - g|``; characters must agree unless one side vanishes."""
        self._check(other)
        if not (self.is_zero() or other.is_zero()) and self.char_exp != other.char_exp:
            raise ValueError("functions carry different characters")
        p, q = self.scaled_pieces(), other.scaled_pieces()
        return max((abs(v) for _, _, v in _combine(p, q, lambda x, y: (x or 0) - (y or 0))),
                   default=0.0)

    def allclose(self, other: "StepFunction", tol: float = VALUE_TOL) -> bool:
        return self.max_diff(other) <= tol

    def same_partition(self, other: "StepFunction") -> bool:
        return [(a, b) for a, b, _ in self.pieces] == [(a, b) for a, b, _ in other.pieces]


# ---------------------------------------------------------------------------
# periodic functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicStepFunction:
    """1-periodic ``exp(2 pi i c xi) * step(xi)`` stored on ``[0, 1)``."""

    pieces: tuple[Piece, ...] = ()
    char_exp: Fraction = Fraction(0)

    def __post_init__(self):
        pieces = _canon(((dyadic(a), dyadic(b), complex(v)) for a, b, v in self.pieces),
                        keep_zeros=True)
        if pieces and (pieces[0][0] < 0 or pieces[-1][1] > 1):
            raise ValueError("periodic pieces must lie in [0, 1)")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "char_exp", dyadic(self.char_exp))

    @classmethod
    def constant(cls, value: complex = 1, domain: Optional[PeriodicSet] = None,
                 char_exp=0) -> "PeriodicStepFunction":
        domain = PeriodicSet.full() if domain is None else domain
        return cls(tuple((a, b, value) for a, b in domain), dyadic(char_exp))

    indicator = constant

    @classmethod
    def from_pieces(cls, pieces, char_exp=0) -> "PeriodicStepFunction":
        return cls(tuple((dyadic(a), dyadic(b), v) for a, b, v in pieces), dyadic(char_exp))

    @classmethod
    def zero(cls) -> "PeriodicStepFunction":
        return cls(())

    def _like(self, pieces, char_exp=None) -> "PeriodicStepFunction":
        return PeriodicStepFunction(tuple(pieces), self.char_exp if char_exp is None else char_exp)

    # inspection -----------------------------------------------------------
    def domain(self) -> PeriodicSet:
        return PeriodicSet(tuple((a, b) for a, b, _ in self.pieces))

    def support(self) -> PeriodicSet:
        return PeriodicSet(tuple((a, b) for a, b, v in self.pieces if v != 0))

    def zero_set(self) -> PeriodicSet:
        """Points of the domain where the function vanishes."""
        return PeriodicSet(tuple((a, b) for a, b, v in self.pieces if v == 0))

    def breakpoints(self) -> list[Fraction]:
        return sorted({t for a, b, _ in self.pieces for t in (a, b)})

    def finest_exp(self) -> int:
        return max([exponent(t) for t in self.breakpoints()] + [exponent(self.char_exp)])

    def _reduce(self, t):
        return t - math.floor(t)

    def coef(self, t) -> complex:
        p = _locate(self.pieces, self._reduce(t))
        return p[2] if p else 0j

    def __call__(self, t) -> complex:
        r = self._reduce(t)
        p = _locate(self.pieces, r)
        return p[2] * _phase_at(self.char_exp, r) if p else 0j

    def is_zero(self) -> bool:
        return all(v == 0 for _, _, v in self.pieces)

    # algebra --------------------------------------------------------------
    def multiply(self, other: "PeriodicStepFunction") -> "PeriodicStepFunction":
        return self._like(_combine(self.pieces, other.pieces, _mul),
                          self.char_exp + other.char_exp)

    def add(self, other: "PeriodicStepFunction") -> "PeriodicStepFunction":
        if self.pieces and other.pieces and self.char_exp != other.char_exp:
            raise ValueError("cannot add functions with different characters")
        c = self.char_exp if self.pieces else other.char_exp
        out = [(a, b, 0j if abs(v) < ZERO_SNAP else v)
               for a, b, v in _combine(self.pieces, other.pieces, _add)]
        return self._like(out, c)

    def conjugate(self) -> "PeriodicStepFunction":
        return self._like([(a, b, v.conjugate()) for a, b, v in self.pieces], -self.char_exp)

    def modulus(self) -> "PeriodicStepFunction":
        return self._like([(a, b, abs(v)) for a, b, v in self.pieces], Fraction(0))

    def scale_by(self, z: complex) -> "PeriodicStepFunction":
        return self._like([(a, b, v * z) for a, b, v in self.pieces])

    def map_values(self, fn: Callable[[complex], complex]) -> "PeriodicStepFunction":
        return self._like([(a, b, fn(v)) for a, b, v in self.pieces])

    def __mul__(self, other):
        if isinstance(other, PeriodicStepFunction):
            return self.multiply(other)
        if isinstance(other, StepFunction):
            return mul_periodic(self, other)
        return self.scale_by(other)

    def __rmul__(self, other):
        return self.scale_by(other)

    def __add__(self, other):
        return self.add(other)

    def __neg__(self):
        return self.scale_by(-1)

    def __sub__(self, other):
        return self.add(-other)

    def restrict(self, E: PeriodicSet) -> "PeriodicStepFunction":
        """Restrict the domain to ``E``."""
        return self._like(_restrict(self.pieces, E.intervals))

    def extend(self, other: "PeriodicStepFunction") -> "PeriodicStepFunction":
        """Union of two functions with disjoint domains."""
        if not self.domain().intersect(other.domain()).is_empty():
            raise ValueError("domains overlap")
        if self.pieces and other.pieces and self.char_exp != other.char_exp:
            raise ValueError("cannot join functions with different characters")
        c = self.char_exp if self.pieces else other.char_exp
        return self._like(self.pieces + other.pieces, c)

    # geometry -------------------------------------------------------------
    def shift(self, q) -> "PeriodicStepFunction":
        """``xi -> m(xi + q)``."""
        q = dyadic(q)
        lifted = _lift(self.pieces, self.char_exp, q, q + 1)
        ph = unit(self.char_exp * q) if self.char_exp else 1
        return self._like([(a - q, b - q, v * ph) for a, b, v in lifted])

    def dilate_inf(self, j: int) -> "PeriodicStepFunction":
        """``xi -> m(2**j xi)`` for ``j >= 0`` (still 1-periodic)."""
        if j < 0:
            raise ValueError("m(2**j xi) is not 1-periodic for j < 0; use on_line")
        lifted = _lift(self.pieces, self.char_exp, Fraction(0), pow2(j))
        return self._like(_scale_x(lifted, pow2(-j)), self.char_exp * pow2(j))

    def on_line(self, window_exp: int = DEFAULT_WINDOW_EXP, j: int = 0) -> StepFunction:
        """``xi -> m(2**j xi)`` as a line function on the window; zeros dropped."""
        w = pow2(window_exp + j)
        lifted = _lift(self.pieces, self.char_exp, -w, w)
        return StepFunction(tuple(_scale_x(lifted, pow2(-j))), self.char_exp * pow2(j), window_exp)

    # integrals ------------------------------------------------------------
    def integral(self) -> complex:
        if self.char_exp:
            raise ValueError("integral of a twisted periodic function is not a step sum")
        return sum((v * float(b - a) for a, b, v in self.pieces), 0j)

    def integrate_abs_sq(self) -> float:
        return sum(((v.real * v.real + v.imag * v.imag) * float(b - a)
                    for a, b, v in self.pieces), 0.0)

    # comparison -----------------------------------------------------------
    def max_diff(self, other: "PeriodicStepFunction", on: Optional[PeriodicSet] = None) -> float:
        p, q = self.pieces, other.pieces
        if on is not None:
            p, q = _restrict(p, on.intervals), _restrict(q, on.intervals)
        if self.char_exp != other.char_exp and not (self.is_zero() or other.is_zero()):
            raise ValueError("functions carry different characters")
        return max((abs(v) for _, _, v in _combine(p, q, lambda x, y: (x or 0) - (y or 0))),
                   default=0.0)

    def allclose(self, other: "PeriodicStepFunction", tol: float = VALUE_TOL,
                 on: Optional[PeriodicSet] = None) -> bool:
        return self.max_diff(other, on) <= tol


# ---------------------------------------------------------------------------
# operations across the two kinds
# ---------------------------------------------------------------------------

def fold(f: StepFunction) -> PeriodicStepFunction:
    """``xi -> sum_k f(xi + k)`` as a periodic function (zeros dropped)."""
    pieces = _accumulate(_fold(f.scaled_pieces(), f.char_exp))
    return PeriodicStepFunction(tuple(p for p in pieces if p[2] != 0), f.char_exp)


def bracket(f: StepFunction, g: StepFunction) -> PeriodicStepFunction:
    """``[f, g](xi) = sum_k f(xi + k) conj(g(xi + k))``."""
    return fold(f.multiply(g.conjugate()))


def weight(f: StepFunction) -> PeriodicStepFunction:
    """The periodization ``p_f = [f, f]``."""
    return fold(f.abs_sq())


def mul_periodic(m: PeriodicStepFunction, f: StepFunction) -> StepFunction:
    """Fourier side of ``m • f``: the periodic extension of ``m`` times ``f``."""
    return m.on_line(f.window_exp).multiply(f)


def integrate_periodic_abs_sq(m: PeriodicStepFunction) -> float:
    return m.integrate_abs_sq()


def fold_consistent(pieces: Sequence[Piece], char: Fraction, tol: float = VALUE_TOL):
    """Fold line pieces (zeros allowed) onto ``[0, 1)`` requiring agreement.

    Returns ``(periodic_function, None)`` or ``(None, witness)`` where the
    witness is ``(xi, first_value, conflicting_value)`` at the first point
    where two integer translates disagree.
    """
    folded = sorted(_fold(pieces, char), key=lambda p: p[0])
    cuts = sorted({t for a, b, _ in folded for t in (a, b)})
    index = {t: n for n, t in enumerate(cuts)}
    vals: list[Optional[complex]] = [None] * max(len(cuts) - 1, 0)
    for a, b, v in folded:
        for n in range(index[a], index[b]):
            if vals[n] is None:
                vals[n] = v
            elif abs(vals[n] - v) > tol:
                return None, (cuts[n], vals[n], v)
    out = [(cuts[n], cuts[n + 1], v) for n, v in enumerate(vals) if v is not None]
    return PeriodicStepFunction(tuple(out), char), None


def periodic_partition(*fns: PeriodicStepFunction, on: Optional[PeriodicSet] = None):
    """Common refinement of several periodic functions over ``on``.

    Yields ``(a, b, values)`` where ``values[i]`` is the coefficient of
    ``fns[i]`` on ``[a, b)`` (0 outside its domain).
    """
    cuts = {Fraction(0), Fraction(1)}
    for f in fns:
        cuts.update(f.breakpoints())
    if on is not None:
        cuts.update(on.breakpoints())
    cuts = sorted(cuts)
    for a, b in zip(cuts, cuts[1:]):
        if on is not None and a not in on:
            continue
        yield a, b, [f.coef(a) for f in fns]


def line_partition(*fns: StepFunction, region: Optional[LineSet] = None):
    """Common refinement of line functions over ``region`` (default: window)."""
    if not fns:
        return
    cuts = set()
    for f in fns:
        cuts.update(f.breakpoints())
    region = region if region is not None else LineSet.window(fns[0].window_exp)
    cuts.update(region.breakpoints())
    cuts = sorted(cuts)
    for a, b in zip(cuts, cuts[1:]):
        if a not in region:
            continue
        yield a, b, [f.coef(a) for f in fns]


def sum_normalized(values: Iterable[float]) -> float:
    return math.fsum(values)


def symmetric_indicator(a, b, value: complex = 1, window_exp: int = DEFAULT_WINDOW_EXP,
                        char_exp=0) -> StepFunction:
    """``value * chi_{±[a, b)}``."""
    return StepFunction.indicator(LineSet.symmetric(a, b, window_exp), value, char_exp)


def interval_indicator(a, b, value: complex = 1, window_exp: int = DEFAULT_WINDOW_EXP,
                       char_exp=0) -> StepFunction:
    return StepFunction.indicator(LineSet.of((a, b), window_exp=window_exp), value, char_exp)


def lineset_from_pieces(pieces: Iterable[tuple], window_exp: int) -> LineSet:
    return LineSet(normalize((a, b) for a, b, *_ in pieces), window_exp)
