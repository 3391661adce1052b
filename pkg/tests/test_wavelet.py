import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import W, ev, grid, pev, sign_psteps
from frameforge.checks import DegenerateError, NonAnnularError, VerificationError
from frameforge.dyadic import PeriodicSet
from frameforge.filterbank import filter_pair
from frameforge.scaling import is_scaling
from frameforge.stepfn import PeriodicStepFunction, StepFunction, interval_indicator, symmetric_indicator, weight
from frameforge.unimodular import delta
from frameforge.wavelet import (
    D_psi,
    Wavelet,
    calderon,
    dimension_function,
    gauge_wavelet,
    is_parseval,
    parseval_on_test,
    semiorthogonality_evidence,
    synthesize,
    telescoping,
    tq,
    tq_function,
)


def calderon_oracle(psi, t, depth=20):
    return sum(abs(ev(psi, t * F(2) ** j)) ** 2 for j in range(-depth, depth + 1))


def tq_oracle(psi, t, q, depth=20):
    return sum(ev(psi, t * 2 ** j) * ev(psi, (t + q) * 2 ** j).conjugate() for j in range(depth + 1))


def synth(phi):
    pair = is_scaling(phi)
    fp = filter_pair(pair)
    return pair, synthesize(pair, fp.m1, fp.m0)


class TestSynthesis:
    def test_shannon(self, shannon, psi0):
        _, w = synth(shannon)
        assert w.psi_hat.modulus() == psi0
        assert w.psi_hat.char_exp == F(1, 2)

    def test_quarter_grid_oracle(self, phi1, psi1):
        pair, w = synth(phi1)
        assert w.psi_hat.modulus() == psi1
        for t in grid(-8, 8, 10)[::3]:
            want = pev(w.m1, t / 2) * ev(phi1, t / 2)
            assert abs(ev(w.psi_hat, t) - want) < 1e-12

    def test_support_formula(self, phi1):
        pair, w = synth(phi1)
        C = pair.C
        doubled = C.dilate(1)
        shrink = [(a, b) for a, b, _ in phi1.pieces
                  if abs(phi1.coef(a)) < abs(phi1.coef(a / 2))]
        assert w.psi_hat.support() == doubled.difference(C).union(type(C).of(*shrink))

    def test_degenerate(self, shannon):
        with pytest.raises(DegenerateError, match="degenerate high-pass"):
            synthesize(is_scaling(shannon), PeriodicStepFunction.constant(0, char_exp=1))


class TestCalderon:
    @pytest.mark.parametrize("name", ["psi0", "psi1"])
    def test_reference(self, name, request):
        psi = request.getfixturevalue(name)
        c = calderon(psi)
        assert c and c.max_dev == 0

    @pytest.mark.parametrize("name", ["psi0", "psi1"])
    def test_dense_grid_oracle(self, name, request):
        psi = request.getfixturevalue(name)
        pieces = calderon(psi).data["octave_sum"]
        for t in grid(1, 2, 12)[::4] + grid(-2, -1, 12)[::4]:
            got = next(v for a, b, v in pieces if a <= t < b)
            assert abs(calderon_oracle(psi, t) - got) < 1e-9

    def test_scaled(self, psi0):
        assert calderon(psi0.scale_by(2 ** -0.5)).max_dev == pytest.approx(0.5)

    def test_non_annular(self):
        with pytest.raises(NonAnnularError, match="non-annular"):
            calderon(interval_indicator(0, 1))


class TestTq:
    @pytest.mark.parametrize("q", [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9])
    def test_reference_zero(self, q, psi0, psi1):
        assert tq(psi0, q).max_dev == 0
        assert tq(psi1, q).max_dev == 0

    def test_oracle_agreement_on_mixed_example(self):
        psi = symmetric_indicator(F(1, 2), F(5, 4), 1).add(interval_indicator(F(3, 2), 2, 1j))
        for q in (1, -1, 3):
            t, _ = tq_function(psi, q)
            for x in grid(-4, 4, 7)[::3]:
                assert abs(ev(t, x) - tq_oracle(psi, x, q)) < 1e-9

    def test_half_line_indicator_is_vacuous(self):
        # chi_[0,1): psi(2**j xi) and psi(2**j (xi + q)) never overlap for odd q
        psi = interval_indicator(F(1, 64), 1)
        for q in (1, -1, 3):
            assert tq(psi, q).max_dev == 0
        for x in grid(-2, 1, 8):
            assert tq_oracle(interval_indicator(0, 1), x, 1) == 0

    def test_symmetric_unit_interval_witness(self):
        psi = symmetric_indicator(F(1, 64), 1)
        c = tq(psi, 1)
        assert not c
        assert -1 <= c.witness.xi < 0


class TestParseval:
    def test_reference(self, psi0, psi1):
        assert is_parseval(psi0).parseval_verdict
        assert is_parseval(psi1).parseval_verdict

    def test_scaled_fails(self, psi0):
        r = is_parseval(psi0.scale_by(1.1))
        assert not r.parseval_verdict and r.calderon_max_dev == pytest.approx(0.21)

    def test_synthesized(self, shannon, phi1):
        for phi in (shannon, phi1):
            _, w = synth(phi)
            assert is_parseval(w).parseval_verdict

    @given(sign_psteps())
    @settings(max_examples=15)
    def test_verdict_invariant_under_phase(self, mu):
        _, w = synth(interval_indicator(F(-1, 4), F(1, 4)))
        twisted = mu.on_line(W, -3).multiply(w.psi_hat)
        assert is_parseval(twisted).parseval_verdict


class TestTelescoping:
    def test_synthesized_zero(self, shannon, phi1):
        for phi in (shannon, phi1):
            pair, w = synth(phi)
            assert telescoping(pair, w).max_dev == 0

    def test_mismatch(self, shannon, psi1):
        c = telescoping(shannon, psi1)
        assert not c
        assert F(1, 4) <= c.witness.xi < F(1, 2)

    def test_D_psi(self, shannon, phi1, psi0, psi1):
        for phi in (shannon, phi1):
            _, w = synth(phi)
            assert D_psi(w).max_diff(weight(phi)) == 0
        assert D_psi(psi0).allclose(PeriodicStepFunction.constant(1))
        assert D_psi(psi1).support() == PeriodicSet.of((0, F(1, 4)), (F(3, 4), 1))
        assert D_psi(StepFunction.zero()).is_zero()


class TestDimension:
    def test_examples(self, shannon, phi1):
        assert dimension_function([shannon]).allclose(PeriodicStepFunction.constant(1))
        assert dimension_function([phi1]).support() == PeriodicSet.of((0, F(1, 4)), (F(3, 4), 1))
        two = dimension_function([shannon, interval_indicator(1, 2)])
        assert two.allclose(PeriodicStepFunction.constant(2))


class TestParsevalOnTest:
    def test_examples(self, psi0):
        r = parseval_on_test(interval_indicator(F(1, 2), 1), psi0)
        assert r.deviation <= 1e-10
        r = parseval_on_test(psi0, psi0)
        assert r.total == pytest.approx(1) and r.norm_sq == 1
        f = interval_indicator(1, 2)
        r = parseval_on_test(f, psi0.scale_by(1.1))
        assert r.deviation == pytest.approx(0.21 * f.norm_sq())

    def test_random_functions(self, psi0, psi1):
        rng = random.Random(11)
        for psi in (psi0, psi1):
            for _ in range(5):
                pieces, x = [], F(rng.randrange(4, 16), 16)
                while x < 3:
                    y = x + F(rng.randrange(1, 9), 16)
                    pieces.append((x, min(y, F(3)), complex(rng.uniform(-1, 1), rng.uniform(-1, 1))))
                    x = y
                f = StepFunction(tuple(pieces), F(0), W)
                r = parseval_on_test(f, psi)
                assert r.deviation <= 1e-10 * f.norm_sq() and not r.missing_scales

    def test_missing_scales_reported(self, psi0):
        r = parseval_on_test(interval_indicator(1, 2), psi0, 0, 0)
        assert r.missing_scales


class TestGauge:
    def test_identity(self, shannon):
        _, w = synth(shannon)
        g = gauge_wavelet(w)
        assert g.psi_direct == w.psi_hat and g.max_dev == 0

    @given(sign_psteps(), sign_psteps())
    @settings(max_examples=25)
    def test_dual_paths(self, mu, nu):
        for phi in (interval_indicator(F(-1, 2), F(1, 2)), interval_indicator(F(-1, 4), F(1, 4))):
            _, w = synth(phi)
            g = gauge_wavelet(w, mu, nu, delta(mu))
            assert g.max_dev <= 1e-12 and g.modulus_dev == 0

    def test_sigma_mismatch(self, shannon):
        _, w = synth(shannon)
        mu = PeriodicStepFunction(((0, F(1, 2), 1), (F(1, 2), 1, -1)))
        with pytest.raises(VerificationError):
            gauge_wavelet(w, mu, None, None)

    def test_needs_provenance(self, psi0):
        with pytest.raises(VerificationError):
            gauge_wavelet(Wavelet(psi0))


class TestSemiorthogonality:
    def test_reference(self, psi0, psi1):
        for psi in (psi0, psi1):
            r = semiorthogonality_evidence(psi)
            assert r.ok and r.d_binary

    def test_overlapping_scales(self):
        r = semiorthogonality_evidence(interval_indicator(F(1, 2), 2))
        assert not r.ok and r.cross_witness == (1, 0)
