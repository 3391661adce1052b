"""Exact dyadic rationals and finite unions of half-open intervals.

Every endpoint is a :class:`fractions.Fraction` whose denominator is a power
of two.  Sets on the line live inside a window ``[-2**W, 2**W)``; sets on the
torus are stored as their representative inside ``[0, 1)``.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_WINDOW_EXP = 4

Interval = tuple[Fraction, Fraction]


class WindowError(ValueError):
    """An operation would leave the line window or mixes two windows."""


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def dyadic(x) -> Fraction:
    """Coerce ``x`` to an exact dyadic rational.

    Accepts ints, Fractions, floats (always dyadic), and strings such as
    ``"3/8"`` or ``"-0.125"``.  Anything with a non power-of-two denominator
    raises ``ValueError``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not dyadic rationals")
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        q = Fraction(x)
    else:
        q = Fraction(x)
    if not is_dyadic(q):
        raise ValueError(f"{x!r} is not a dyadic rational")
    return q


def from_num_exp(num: int, exp: int) -> Fraction:
    if exp < 0:
        raise ValueError("exp must be non-negative")
    return Fraction(int(num), 1 << int(exp))


def num_exp(q: Fraction) -> tuple[int, int]:
    """Canonical ``(num, exp)`` with ``q == num / 2**exp``."""
    if not is_dyadic(q):
        raise ValueError(f"{q} is not a dyadic rational")
    return q.numerator, q.denominator.bit_length() - 1


def exponent(q: Fraction) -> int:
    """Binary exponent of the denominator of ``q`` (0 for integers)."""
    return q.denominator.bit_length() - 1


def pow2(j: int) -> Fraction:
    return Fraction(1 << j) if j >= 0 else Fraction(1, 1 << -j)


# ---------------------------------------------------------------------------
# interval-list kernels (sorted, disjoint, non-adjacent [a, b) pairs)
# ---------------------------------------------------------------------------

def normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted((a, b) for a, b in intervals if a < b)
    out: list[list[Fraction]] = []
    for a, b in items:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def _intersect(x: Sequence[Interval], y: Sequence[Interval]) -> tuple[Interval, ...]:
    out = []
    i = j = 0
    while i < len(x) and j < len(y):
        a = max(x[i][0], y[j][0])
        b = min(x[i][1], y[j][1])
        if a < b:
            out.append((a, b))
        if x[i][1] < y[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def _complement(x: Sequence[Interval], lo: Fraction, hi: Fraction) -> tuple[Interval, ...]:
    out = []
    cur = lo
    for a, b in x:
        if a > cur:
            out.append((cur, min(a, hi)))
        cur = max(cur, b)
    if cur < hi:
        out.append((cur, hi))
    return normalize(out)


def _contains(x: Sequence[Interval], t) -> bool:
    i = bisect_right(x, (t, math.inf)) - 1
    return i >= 0 and x[i][0] <= t < x[i][1]


def _measure(x: Sequence[Interval]) -> Fraction:
    return sum((b - a for a, b in x), Fraction(0))


class _IntervalSet:
    intervals: tuple[Interval, ...]

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def __contains__(self, t) -> bool:
        return _contains(self.intervals, t)

    def is_empty(self) -> bool:
        return not self.intervals

    def measure(self) -> Fraction:
        return _measure(self.intervals)

    def breakpoints(self) -> list[Fraction]:
        return sorted({t for iv in self.intervals for t in iv})

    def finest_exp(self) -> int:
        return max((exponent(t) for t in self.breakpoints()), default=0)

    def __repr__(self):
        body = " ∪ ".join(f"[{a}, {b})" for a, b in self.intervals) or "∅"
        return f"{type(self).__name__}({body})"


@dataclass(frozen=True, repr=False)
class LineSet(_IntervalSet):
    """Finite union of half-open dyadic intervals inside ``[-2**W, 2**W)``."""

    intervals: tuple[Interval, ...] = ()
    window_exp: int = DEFAULT_WINDOW_EXP

    def __post_init__(self):
        ivs = normalize((dyadic(a), dyadic(b)) for a, b in self.intervals)
        lo, hi = self.bounds
        if ivs and (ivs[0][0] < lo or ivs[-1][1] > hi):
            raise WindowError(f"intervals leave the window [{lo}, {hi})")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def of(cls, *intervals, window_exp: int = DEFAULT_WINDOW_EXP) -> "LineSet":
        return cls(tuple(intervals), window_exp)

    @classmethod
    def symmetric(cls, a, b, window_exp: int = DEFAULT_WINDOW_EXP) -> "LineSet":
        """The set ``±[a, b)``, i.e. ``[-b, -a) ∪ [a, b)``."""
        a, b = dyadic(a), dyadic(b)
        return cls(((-b, -a), (a, b)), window_exp)

    @classmethod
    def window(cls, window_exp: int = DEFAULT_WINDOW_EXP) -> "LineSet":
        w = pow2(window_exp)
        return cls(((-w, w),), window_exp)

    @property
    def bounds(self) -> Interval:
        w = pow2(self.window_exp)
        return -w, w

    def _same(self, other: "LineSet") -> None:
        if not isinstance(other, LineSet):
            raise TypeError("expected a LineSet")
        if other.window_exp != self.window_exp:
            raise WindowError("window mismatch")

    def _new(self, intervals, clip: bool = False) -> "LineSet":
        if clip:
            intervals = _intersect(normalize(intervals), (self.bounds,))
        return LineSet(tuple(intervals), self.window_exp)

    def union(self, other: "LineSet") -> "LineSet":
        self._same(other)
        return self._new(self.intervals + other.intervals)

    def intersect(self, other: "LineSet") -> "LineSet":
        self._same(other)
        return self._new(_intersect(self.intervals, other.intervals))

    def complement(self) -> "LineSet":
        return self._new(_complement(self.intervals, *self.bounds))

    complement_in_window = complement

    def difference(self, other: "LineSet") -> "LineSet":
        self._same(other)
        return self.intersect(other.complement())

    set_difference = difference

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def issubset(self, other: "LineSet") -> bool:
        return self.difference(other).is_empty()

    def dilate(self, j: int, clip: bool = False) -> "LineSet":
        """The set ``2**j * A``."""
        s = pow2(j)
        return self._new(((a * s, b * s) for a, b in self.intervals), clip)

    def translate(self, q, clip: bool = False) -> "LineSet":
        q = dyadic(q)
        return self._new(((a + q, b + q) for a, b in self.intervals), clip)

    def negate(self) -> "LineSet":
        return self._new((-b, -a) for a, b in self.intervals)

    def periodize(self) -> "PeriodicSet":
        return periodize(self)


@dataclass(frozen=True, repr=False)
class PeriodicSet(_IntervalSet):
    """A ``Z``-periodic set, stored through its trace on ``[0, 1)``."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        ivs = normalize((dyadic(a), dyadic(b)) for a, b in self.intervals)
        if ivs and (ivs[0][0] < 0 or ivs[-1][1] > 1):
            raise ValueError("periodic set intervals must lie in [0, 1)")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def of(cls, *intervals) -> "PeriodicSet":
        return cls(tuple(intervals))

    @classmethod
    def full(cls) -> "PeriodicSet":
        return cls(((Fraction(0), Fraction(1)),))

    @classmethod
    def wrap(cls, intervals: Iterable[Interval]) -> "PeriodicSet":
        """Reduce arbitrary line intervals modulo 1."""
        out = []
        for a, b in intervals:
            a, b = dyadic(a), dyadic(b)
            if b - a >= 1:
                return cls.full()
            k = math.floor(a)
            a, b = a - k, b - k
            if b <= 1:
                out.append((a, b))
            else:
                out.append((a, Fraction(1)))
                out.append((Fraction(0), b - 1))
        return cls(tuple(out))

    def union(self, other: "PeriodicSet") -> "PeriodicSet":
        return PeriodicSet(self.intervals + other.intervals)

    def intersect(self, other: "PeriodicSet") -> "PeriodicSet":
        return PeriodicSet(_intersect(self.intervals, other.intervals))

    def complement(self) -> "PeriodicSet":
        return PeriodicSet(_complement(self.intervals, Fraction(0), Fraction(1)))

    def difference(self, other: "PeriodicSet") -> "PeriodicSet":
        return self.intersect(other.complement())

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def issubset(self, other: "PeriodicSet") -> bool:
        return self.difference(other).is_empty()

    def shift(self, q) -> "PeriodicSet":
        """The set ``S + q`` (mod 1)."""
        q = dyadic(q)
        return PeriodicSet.wrap((a + q, b + q) for a, b in self.intervals)

    def halve(self) -> "PeriodicSet":
        """The set ``S/2 = {x : 2x in S}`` (mod 1)."""
        half = Fraction(1, 2)
        return PeriodicSet(tuple(
            (a * half + s, b * half + s) for a, b in self.intervals for s in (0, half)))

    def lift(self, window_exp: int = DEFAULT_WINDOW_EXP) -> LineSet:
        """``(S + Z)`` intersected with the line window."""
        w = 1 << window_exp
        return LineSet(tuple((a + k, b + k) for k in range(-w, w)
                             for a, b in self.intervals), window_exp)


def periodize(A: LineSet) -> PeriodicSet:
    """``(A + Z) ∩ [0, 1)``."""
    return PeriodicSet.wrap(A.intervals)


def half_shift_closure(S: PeriodicSet) -> PeriodicSet:
    """``S ∪ (S + 1/2)``, the smallest half-integer invariant superset."""
    return S.union(S.shift(Fraction(1, 2)))


def octave_split(a: Fraction, b: Fraction) -> list[tuple[int, Fraction, Fraction]]:
    """Cut ``[a, b)`` (with ``0 <= a`` or ``b <= 0``, not touching 0) at powers of two.

    Returns ``(k, a_k, b_k)`` with ``[a_k, b_k)`` inside ``±[2**k, 2**(k+1))``.
    """
    if a < 0 < b or a == 0 or b == 0:
        raise ValueError("interval touches 0")
    out = []
    if a > 0:
        k = math.floor(math.log2(a))
        while pow2(k + 1) <= a:
            k += 1
        while pow2(k) > a:
            k -= 1
        lo = a
        while lo < b:
            hi = min(b, pow2(k + 1))
            out.append((k, lo, hi))
            lo, k = hi, k + 1
    else:
        for k, x, y in octave_split(-b, -a):
            out.append((k, -y, -x))
        out.reverse()
    return out


def fold_to_octave(a: Fraction, b: Fraction) -> list[Interval]:
    """Images of ``[a, b)`` in the fundamental octaves ``[-2, -1) ∪ [1, 2)``."""
    return [(x * pow2(-k), y * pow2(-k)) for k, x, y in octave_split(a, b)]


def dilation_gaps(A: LineSet) -> LineSet:
    """Part of ``[-2, -1) ∪ [1, 2)`` missed by every dilate ``2**j A``.

    Empty exactly when the dilates of ``A`` cover the line up to ``{0}``.
    The result lives in a window of exponent at least 1.
    """
    W = max(A.window_exp, 1)
    hit = []
    for a, b in A:
        if a < 0 < b:
            return LineSet((), W)
        if a == 0:
            hit.append((Fraction(1), Fraction(2)))
            continue
        if b == 0:
            hit.append((Fraction(-2), Fraction(-1)))
            continue
        hit.extend(fold_to_octave(a, b))
    fundamental = LineSet(((Fraction(-2), Fraction(-1)), (Fraction(1), Fraction(2))), W)
    return fundamental.difference(LineSet(tuple(hit), W))
