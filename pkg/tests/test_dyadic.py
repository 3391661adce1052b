from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import grid, linesets, member, psets
from frameforge.dyadic import (
    LineSet,
    PeriodicSet,
    WindowError,
    dilation_gaps,
    dyadic,
    from_num_exp,
    half_shift_closure,
    num_exp,
    octave_split,
    periodize,
)


def L(*ivs):
    return LineSet.of(*[(F(a), F(b)) for a, b in ivs])


def P(*ivs):
    return PeriodicSet.of(*[(F(a), F(b)) for a, b in ivs])


class TestScalars:
    def test_canonical_num_exp(self):
        assert num_exp(F(3, 8)) == (3, 3)
        assert num_exp(F(4)) == (4, 0)
        assert num_exp(F(-6, 16)) == (-3, 3)

    def test_round_trip(self):
        assert from_num_exp(*num_exp(F(-5, 32))) == F(-5, 32)

    @pytest.mark.parametrize("bad", [F(1, 3), "2/5", "0.1"])
    def test_rejects_non_dyadic(self, bad):
        with pytest.raises(ValueError):
            dyadic(bad)

    def test_accepts_strings_and_floats(self):
        assert dyadic("3/8") == F(3, 8)
        assert dyadic(-0.125) == F(-1, 8)


class TestSetAlgebra:
    def test_adjacent_union_merges(self):
        assert L((0, 1)).union(L((1, 2))) == L((0, 2))

    def test_disjoint_intersection_empty(self):
        assert L((0, 1)).intersect(L((1, 2))).is_empty()

    def test_difference_measure(self):
        assert L((-1, 1)).difference(L((0, F(1, 2)))).measure() == F(3, 2)

    def test_window_mismatch(self):
        with pytest.raises(WindowError):
            L((0, 1)).union(LineSet.of((0, 1), window_exp=3))

    def test_leaving_window_is_an_error(self):
        with pytest.raises(WindowError):
            L((8, 16)).dilate(1)
        assert L((8, 16)).dilate(1, clip=True).is_empty()

    @given(linesets(), linesets())
    def test_measure_additivity(self, A, B):
        assert A.union(B).measure() + A.intersect(B).measure() == A.measure() + B.measure()

    @settings(max_examples=25)
    @given(linesets(), linesets())
    def test_grid_oracle(self, A, B):
        # endpoints lie on the 2**-5 grid, so the 2**-6 grid samples every cell
        for t in grid(-4, 4, 6):
            a, b = member(A.intervals, t), member(B.intervals, t)
            assert member(A.union(B).intervals, t) == (a or b)
            assert member(A.intersect(B).intervals, t) == (a and b)
            assert member(A.difference(B).intervals, t) == (a and not b)
            assert member(A.complement().intervals, t) == (not a)

    def test_full_grid_oracle_step_2_12(self):
        A, B = L((F(-3, 8), F(5, 16)), (1, F(7, 4))), L((F(1, 4), F(3, 2)))
        U, I = A.union(B), A.intersect(B)
        for t in grid(-16, 16, 12)[::7]:
            assert member(U.intervals, t) == (member(A.intervals, t) or member(B.intervals, t))
            assert member(I.intervals, t) == (member(A.intervals, t) and member(B.intervals, t))


class TestDilateTranslate:
    def test_examples(self):
        assert LineSet.symmetric(F(1, 4), F(1, 2)).dilate(1) == LineSet.symmetric(F(1, 2), 1)
        assert L((0, 1)).dilate(0) == L((0, 1))
        assert L((F(-1, 8), F(1, 8))).dilate(-1) == L((F(-1, 16), F(1, 16)))
        assert L((0, F(1, 4))).translate(F(1, 2)) == L((F(1, 2), F(3, 4)))
        assert LineSet().translate(F(3, 8)).is_empty()
        assert L((F(-1, 4), F(1, 4))).translate(1) == L((F(3, 4), F(5, 4)))

    @given(linesets(), st.integers(-3, 2))
    def test_dilate_inverse(self, A, j):
        assert A.dilate(j).dilate(-j) == A
        assert A.dilate(j).measure() == A.measure() * F(2) ** j


class TestPeriodic:
    def test_examples(self):
        assert periodize(L((F(-1, 4), F(1, 4)))) == P((0, F(1, 4)), (F(3, 4), 1))
        assert periodize(L((F(-1, 2), F(1, 2)))) == PeriodicSet.full()
        assert periodize(LineSet.symmetric(F(1, 8), F(1, 4))) == P((F(1, 8), F(1, 4)), (F(3, 4), F(7, 8)))
        assert half_shift_closure(P((0, F(1, 4)), (F(3, 4), 1))) == PeriodicSet.full()
        assert half_shift_closure(PeriodicSet.full()) == PeriodicSet.full()
        assert half_shift_closure(PeriodicSet()).is_empty()

    @given(linesets())
    def test_periodize_grid_oracle(self, A):
        S = periodize(A)
        for t in grid(0, 1, 6):
            assert member(S.intervals, t) == any(member(A.intervals, t + k) for k in range(-16, 17))

    @given(linesets(), st.integers(-2, 2))
    def test_periodize_translation_invariant(self, A, k):
        assert periodize(A.translate(k)) == periodize(A)

    @given(psets())
    def test_half_shift_closure_idempotent(self, S):
        T = half_shift_closure(S)
        assert half_shift_closure(T) == T
        assert T.shift(F(1, 2)) == T

    @given(psets())
    def test_halve_oracle(self, S):
        H = S.halve()
        for t in grid(0, 1, 7):
            assert member(H.intervals, t) == member(S.intervals, (2 * t) % 1)

    @given(psets())
    def test_lift_round_trip(self, S):
        assert periodize(S.lift(4)) == S


class TestOctaves:
    def test_split(self):
        assert octave_split(F(3, 4), F(5, 2)) == [(-1, F(3, 4), F(1)), (0, F(1), F(2)), (1, F(2), F(5, 2))]

    def test_gaps(self):
        assert dilation_gaps(L((F(-1, 2), F(1, 2)))).is_empty()
        gaps = dilation_gaps(L((F(1, 2), 1)))
        assert gaps == L((-2, -1))
