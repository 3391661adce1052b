from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import W, ev, grid, pev, sign_psteps, truncated_product
from frameforge.checks import NotReductiveError, ProductError, VerificationError
from frameforge.dyadic import LineSet, PeriodicSet
from frameforge.scaling import (
    check_S1,
    check_S3,
    extract_lowpass,
    is_scaling,
    product_depth,
    product_modulus,
    support_sets,
    two_scale_residual,
)
from frameforge.stepfn import PeriodicStepFunction, StepFunction, interval_indicator
from frameforge.unimodular import alpha_from_nu, gauge_scaling


def quotient_oracle(phi, t):
    """``phi_hat(2 t) / phi_hat(t)`` at the first translate ``t + k`` inside C."""
    for k in range(-8, 8):
        v = ev(phi, t + k)
        if v != 0 and abs(t + k) < 4:
            return ev(phi, 2 * (t + k)) / v
    return None


class TestSupportSets:
    def test_shannon(self, shannon):
        C, S, St = support_sets(shannon)
        assert C == LineSet.of((F(-1, 2), F(1, 2)))
        assert S == PeriodicSet.full() and St == PeriodicSet.full()

    def test_quarter(self, phi1):
        C, S, St = support_sets(phi1)
        assert C == LineSet.of((F(-1, 4), F(1, 4)))
        assert S == PeriodicSet.of((0, F(1, 4)), (F(3, 4), 1))
        assert St == PeriodicSet.full()

    def test_zero_rejected(self):
        with pytest.raises(VerificationError, match="empty support"):
            support_sets(StepFunction.zero())


class TestS1:
    def test_shannon(self, shannon):
        c = check_S1(shannon)
        assert c and c.data["delta"] == F(1, 2)

    def test_wavelet_fails_with_witness(self, psi1):
        c = check_S1(psi1)
        assert not c
        assert c.witness.interval == (0, F(1, 4))

    def test_half_modulus(self):
        c = check_S1(interval_indicator(F(-1, 2), F(1, 2), 0.5))
        assert not c and abs(c.witness.got - 0.5) < 1e-15


class TestLowpass:
    def test_shannon(self, shannon):
        m0 = extract_lowpass(shannon)
        assert m0.support() == PeriodicSet.of((0, F(1, 4)), (F(3, 4), 1))
        for t in grid(0, 1, 10):
            assert abs(pev(m0, t) - quotient_oracle(shannon, t)) < 1e-12

    def test_quarter(self, phi1):
        m0 = extract_lowpass(phi1)
        assert m0.domain() == PeriodicSet.of((0, F(1, 4)), (F(3, 4), 1))
        assert m0.support() == PeriodicSet.of((0, F(1, 8)), (F(7, 8), 1))
        for t in grid(0, 1, 10):
            q = quotient_oracle(phi1, t)
            if q is not None:
                assert abs(pev(m0, t) - q) < 1e-12

    def test_not_reductive(self):
        phi = interval_indicator(F(-1, 2), F(1, 2)).add(interval_indicator(F(3, 2), 2))
        with pytest.raises(NotReductiveError, match="not reductive") as exc:
            extract_lowpass(phi)
        a, b = exc.value.witness.interval
        assert F(3, 4) <= a and b <= 1

    def test_translate_conflict(self):
        # C/2 ⊆ C holds, but xi and xi + 1 force different quotients
        phi = interval_indicator(F(-1, 2), F(1, 2)).add(interval_indicator(1, F(3, 2), 0.5))
        with pytest.raises(NotReductiveError):
            extract_lowpass(phi)


class TestS3:
    def test_shannon(self, shannon):
        assert check_S3(extract_lowpass(shannon), PeriodicSet.full())

    def test_quarter_vacuous(self, phi1):
        S = support_sets(phi1)[1]
        assert S.intersect(S.shift(F(1, 2))).is_empty()
        assert check_S3(extract_lowpass(phi1), S)

    def test_constant_one_fails_at_zero(self):
        c = check_S3(PeriodicStepFunction.constant(1), PeriodicSet.full())
        assert not c
        assert c.witness.xi == 0 and c.witness.got == 2


class TestComposite:
    def test_shannon_and_quarter(self, shannon, phi1):
        for phi in (shannon, phi1):
            assert is_scaling(phi).verdicts == {"S1": True, "S2": True, "S3": True}

    def test_wavelet_candidate(self, psi1):
        assert is_scaling(psi1).verdicts["S1"] is False

    def test_two_scale_residual_zero(self, shannon, phi1):
        for phi in (shannon, phi1):
            assert two_scale_residual(phi, is_scaling(phi).m0) == 0


class TestProduct:
    def test_shannon_reconstructed(self, shannon):
        m0 = PeriodicStepFunction(((0, F(1, 4), 1), (F(1, 4), F(3, 4), 0), (F(3, 4), 1, 1)))
        assert product_modulus(m0, W) == shannon
        for t in grid(-16, 16, 6):
            assert abs(truncated_product(m0, t) - abs(ev(shannon, t))) < 1e-12

    def test_constant_one(self):
        p = product_modulus(PeriodicStepFunction.constant(1), W)
        assert p == StepFunction.indicator(LineSet.window())

    def test_non_terminating(self):
        with pytest.raises(ProductError, match="does not terminate"):
            product_depth(PeriodicStepFunction.constant(0.5), W)

    def test_maximalized_filter(self):
        r = 2 ** -0.5
        m0 = PeriodicStepFunction(((0, F(1, 8), 1), (F(1, 8), F(3, 8), r), (F(3, 8), F(5, 8), 0),
                                   (F(5, 8), F(7, 8), r), (F(7, 8), 1, 1)))
        p = product_modulus(m0, W)
        expect = {F(0): 1, F(3, 8): r, F(-3, 8): r, F(5, 8): 0.5, F(-5, 8): 0.5, F(7, 8): 0, F(-7, 8): 0}
        for t, v in expect.items():
            assert abs(ev(p, t) - v) < 1e-12
        for t in grid(-16, 16, 8):
            assert abs(abs(ev(p, t)) - truncated_product(m0, t)) < 1e-12

    @given(sign_psteps())
    @settings(max_examples=20)
    def test_round_trip_under_gauge(self, nu):
        nu = PeriodicStepFunction(tuple((a, b, 1 if a == 0 or b == 1 else v) for a, b, v in nu.pieces))
        for phi in (interval_indicator(F(-1, 2), F(1, 2)), interval_indicator(F(-1, 4), F(1, 4))):
            m0 = is_scaling(phi).m0
            phi2, m02 = gauge_scaling(phi, m0, alpha_from_nu(nu))
            full = m02.extend(PeriodicStepFunction.constant(0, m02.domain().complement()))
            assert product_modulus(full, W).restrict(phi.support()) == phi.modulus()
