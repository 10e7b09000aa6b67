import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

import descort as ds
from descort.errors import CompactSupport, InvalidBeta, PoorFit


class TestClassifyTail:
    def test_critical_point_gives_exponential(self):
        tc = ds.classify_tail(3.0, 2.0 / 3.0)
        assert tc.variant == "exponential"
        assert tc.rate == pytest.approx(2.0)

    def test_below_critical_compactifies(self):
        assert ds.classify_tail(3.0, 0.5).variant == "compact"

    def test_above_critical_keeps_power_tail(self):
        tc = ds.classify_tail(3.0, 2.0)
        assert tc.variant == "powerlaw"
        assert tc.exponent == pytest.approx(1.5)

    def test_exact_rational_critical_case(self):
        tc = ds.classify_tail(3, Fraction(2, 3))
        assert tc.variant == "exponential"
        # a fraction epsilon away is NOT critical under exact arithmetic
        tc2 = ds.classify_tail(3, Fraction(2, 3) + Fraction(1, 10 ** 15))
        assert tc2.variant == "powerlaw"

    def test_float_band(self):
        assert ds.classify_tail(3.0, 2 / 3 + 1e-14).variant == "exponential"
        assert ds.classify_tail(3.0, 2 / 3 + 1e-9).variant == "powerlaw"

    def test_resulting_exponent_always_integrable(self):
        for beta in (1.5, 2.5, 6.0):
            for alpha in (ds.critical_alpha(beta) + 0.05, 1.0, 4.0):
                tc = ds.classify_tail(beta, alpha)
                assert tc.exponent > 1

    def test_invalid_beta(self):
        with pytest.raises(InvalidBeta):
            ds.classify_tail(1.0, 2.0)
        with pytest.raises(InvalidBeta):
            ds.classify_tail(0.5, 2.0)


class TestUnitTailPowerLaw:
    @pytest.mark.parametrize("beta", [2.5, 3.0, 4.0])
    def test_tail_coefficient_is_one(self, beta):
        d = ds.unit_tail_power_law(beta)
        xs = np.geomspace(d.onset * 1.5, d.onset * 100, 20)
        assert np.allclose(d.pdf(xs), xs ** -beta, rtol=1e-12)

    def test_normalized(self):
        d = ds.unit_tail_power_law(3.0)
        total = (quad(lambda x: float(d.pdf(x)), 0.0, 50.0,
                      points=[d.onset])[0]
                 + quad(lambda x: float(d.pdf(x)), 50.0, np.inf)[0])
        assert total == pytest.approx(1.0, abs=1e-9)


class TestEstimateTailExponent:
    def test_recovers_its_own_model(self, cfg):
        fit = ds.estimate_tail_exponent(ds.PowerLawTail(3.0, 1.0), cfg)
        assert fit.exponent_estimate == pytest.approx(3.0, rel=5e-3)
        assert fit.r_squared > 0.999
        assert fit.window[1] / fit.window[0] >= 1e3

    def test_qexp_tail_exponent(self, cfg):
        # heavy q-exponential decays with exponent 1/(q-1)
        fit = ds.estimate_tail_exponent(ds.QExponential(1.5), cfg)
        assert fit.exponent_estimate == pytest.approx(2.0, rel=0.02)

    def test_transformed_powerlaw_matches_trichotomy(self, cfg):
        td = ds.transform(ds.PowerLawTail(3.0, 1.0), 2.0, cfg)
        fit = ds.estimate_tail_exponent(td, cfg)
        assert fit.exponent_estimate == pytest.approx(
            ds.classify_tail(3.0, 2.0).exponent, rel=0.02)

    def test_compact_support_rejected(self, staircase, cfg):
        with pytest.raises(CompactSupport):
            ds.estimate_tail_exponent(staircase, cfg)

    def test_exponential_decay_is_a_poor_power_fit(self, cfg):
        with pytest.raises(PoorFit):
            ds.estimate_tail_exponent(ds.Exponential(), cfg)


class TestEstimateDecayRate:
    def test_plain_exponential(self, cfg):
        fit = ds.estimate_decay_rate(ds.Exponential(), cfg)
        assert fit.exponent_estimate == pytest.approx(1.0, rel=1e-3)

    def test_critical_deformation_rate(self, cfg):
        beta = 3.0
        td = ds.transform(ds.unit_tail_power_law(beta),
                          ds.critical_alpha(beta), cfg)
        fit = ds.estimate_decay_rate(td, cfg)
        assert fit.exponent_estimate == pytest.approx(beta - 1.0, rel=0.03)


class TestSupportLength:
    def test_subcritical_is_finite_and_matches_quad(self, cfg):
        d = ds.PowerLawTail(3.0, 1.0)
        val = ds.support_length_of_transform(d, 0.5, cfg)
        oracle = (quad(lambda x: float(d.pdf(x)) ** 0.5, 0.0, 200.0,
                       points=[d.onset], limit=400)[0]
                  + quad(lambda x: float(d.pdf(x)) ** 0.5, 200.0, np.inf,
                         limit=400)[0])
        assert val == pytest.approx(oracle, rel=1e-9)

    def test_critical_diverges(self, cfg):
        assert ds.support_length_of_transform(ds.PowerLawTail(3.0),
                                              2.0 / 3.0, cfg) == math.inf

    def test_uniform_power_rule(self, cfg):
        for alpha in (0.5, 2.0, 3.0):
            assert ds.support_length_of_transform(ds.Uniform(2.0), alpha,
                                                  cfg) == pytest.approx(
                2.0 ** alpha)


class TestEscortContrast:
    def test_classical_escort_keeps_power_tails(self, cfg):
        # rescaling the exponent never leaves the power-law class, unlike
        # the deformation which can compactify or exponentialize
        esc = ds.standard_escort(ds.PowerLawTail(3.0, 1.0), 2.0, cfg)
        fit = ds.estimate_tail_exponent(esc, cfg)
        assert fit.exponent_estimate == pytest.approx(6.0, rel=0.02)


class TestSerialization:
    def test_tail_fit_to_dict(self, cfg):
        fit = ds.estimate_tail_exponent(ds.PowerLawTail(3.0, 1.0), cfg)
        data = fit.to_dict()
        assert set(data) == {"exponent", "r2", "window"}
        assert data["r2"] <= 1.0
