import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

import descort as ds
from descort.errors import (DivergentMap, DivergentMoment, NotInvertible,
                            TransformFailed)


def qexp_shape(y, q):
    """Independent oracle for the q-exponential curve."""
    if abs(q - 1.0) < 1e-12:
        return math.exp(-y)
    u = 1.0 - (1.0 - q) * y / (2.0 - q)
    return u ** (1.0 / (1.0 - q)) if u > 0 else 0.0


class TestYMap:
    def test_exponential_alpha_two_at_log_two(self, cfg):
        # oracle: integral of exp(t) from 0 to x is exp(x) - 1
        ym = ds.y_map(ds.Exponential(), 2.0, cfg)
        assert ym.forward(math.log(2.0)) == pytest.approx(1.0, abs=1e-12)
        oracle = quad(lambda t: math.exp(t), 0.0, math.log(2.0))[0]
        assert oracle == pytest.approx(1.0, abs=1e-12)

    def test_identity_at_alpha_one(self, staircase, cfg):
        for d in (staircase, ds.Exponential(), ds.Uniform(3.0, -1.0)):
            ym = ds.y_map(d, 1.0, cfg)
            xs = np.linspace(-1.0, 3.0, 17)
            assert np.allclose(ym.forward(xs), xs)

    def test_alpha_zero_is_shifted_cdf(self, staircase, cfg):
        for d in (staircase, ds.Exponential()):
            ym = ds.y_map(d, 0.0, cfg)
            xs = np.linspace(0.0, 0.9, 10)
            expect = np.asarray(ds.cdf(d, xs, cfg))  # anchor is 0 here
            assert np.allclose(ym.forward(xs), expect, atol=1e-12)

    def test_anchor_fixed_point(self, staircase, cfg):
        for d in (staircase, ds.Exponential(), ds.QExponential(1.5)):
            for alpha in (-1.0, 0.0, 0.5, 2.0):
                ym = ds.y_map(d, alpha, cfg)
                assert ym.forward(ym.x0) == pytest.approx(ym.x0, abs=1e-12)
        ym = ds.y_map(ds.Exponential(), 2.0, cfg, anchor=0.7)
        assert ym.forward(0.7) == pytest.approx(0.7, abs=1e-12)

    def test_forward_strictly_increasing(self, staircase, hump, cfg):
        # interior window: far past the 0.999 quantile a compactifying map
        # saturates below float resolution
        for d in (staircase, hump, ds.QExponential(1.5),
                  ds.PowerLawTail(3.0, 1.0)):
            for alpha in (-1.0, 0.3, 2.0):
                ym = ds.y_map(d, alpha, cfg)
                xs = np.linspace(ds.quantile(d, 1e-3, cfg),
                                 ds.quantile(d, 0.999, cfg), 200)
                ys = ym.forward(xs)
                assert np.all(np.diff(ys) > 0)

    @pytest.mark.parametrize("alpha", [-1.0, 0.3, 0.5, 2.0, 5.0])
    def test_inverse_inverts_forward(self, alpha, staircase, hump, cfg):
        # where a compactifying map saturates, the round trip is judged by
        # the residual in the image variable (the x error is unbounded by
        # conditioning alone)
        for d in (staircase, hump, ds.Exponential(), ds.QExponential(1.5),
                  ds.PowerLawTail(3.0, 1.0)):
            ym = ds.y_map(d, alpha, cfg)
            lo = ds.quantile(d, 1e-4, cfg)
            hi = ds.quantile(d, 1.0 - 1e-4, cfg)
            xs = np.linspace(lo, hi, 60)
            ys = ym.forward(xs)
            back = ym.inverse(ys)
            ok_x = np.abs(back - xs) <= 1e-9 * (1.0 + np.abs(xs))
            resid = np.abs(ym.forward(back) - ys)
            ok_y = resid <= 1e-11 * (1.0 + np.abs(ys))
            assert np.all(ok_x | ok_y)

    def test_numeric_map_matches_quadrature_oracle(self, cfg):
        d, alpha = ds.PowerLawTail(3.0, 1.0), 2.0
        ym = ds.y_map(d, alpha, cfg)
        for x in (0.5, 2.0, 7.0):
            oracle = quad(lambda t: float(d.pdf(t)) ** (1.0 - alpha), 0.0, x,
                          points=[d.onset] if d.onset < x else None,
                          limit=200)[0]
            assert ym.forward(x) == pytest.approx(oracle, rel=1e-9)

    def test_divergent_endpoint_raises(self, cfg):
        ym = ds.y_map(ds.Exponential(), 2.0, cfg)  # image is [0, inf)
        with pytest.raises(DivergentMap):
            ym.forward(math.inf)

    def test_finite_endpoint_value(self, cfg):
        ym = ds.y_map(ds.Exponential(), 0.5, cfg)  # image is [0, 2)
        assert ym.target_support.upper == pytest.approx(2.0, abs=1e-12)


class TestTransformClosedForms:
    def test_staircase_alpha_ten_geometry(self, staircase, cfg):
        td = ds.transform(staircase, 10.0, cfg)
        h = td.base.heights
        w = td.base.widths
        assert h[0] == pytest.approx(57.6650390625, rel=1e-12)
        assert w[0] == pytest.approx((1 / 3) * 1.5 ** -9, rel=1e-12)
        assert w[0] == pytest.approx(0.00867076, rel=1e-5)

    @pytest.mark.parametrize("q", [0.5, 1.2, 1.5])
    def test_exponential_maps_to_qexponential(self, q, cfg):
        alpha = 1.0 / (2.0 - q)
        td = ds.transform(ds.Exponential(), alpha, cfg)
        assert isinstance(td.base, ds.QExponential)
        assert td.base.q == pytest.approx(q, abs=1e-14)
        ys = np.linspace(0.0, min(td.support.upper, 40.0), 64)
        oracle = np.array([qexp_shape(y, q) for y in ys])
        assert np.allclose(td.pdf(ys), oracle, atol=1e-14)

    def test_uniform_power_rule(self, cfg):
        td = ds.transform(ds.Uniform(2.0), 3.0, cfg)
        assert isinstance(td.base, ds.Uniform)
        assert td.base.a == pytest.approx(8.0)

    def test_qexp_parameter_rule(self, cfg):
        td = ds.transform(ds.QExponential(1.5), 2.0, cfg)
        assert td.base.q == pytest.approx(2.0 + (1.5 - 2.0) / 2.0)  # 1.75

    def test_alpha_zero_gives_unit_box(self, staircase, cfg):
        for d in (staircase, ds.Exponential(), ds.Uniform(5.0, 2.0)):
            td = ds.transform(d, 0.0, cfg)
            assert isinstance(td.base, ds.Uniform)
            assert td.base.a == 1.0
            # anchored at left edge: no mass sits below the anchor
            assert td.base.x0 == pytest.approx(d.anchor_default())

    def test_alpha_zero_interior_anchor_splits_mass(self, cfg):
        # box sides below/above the anchor carry the source masses
        anchor = math.log(2.0)  # median of the exponential
        td = ds.transform(ds.Exponential(), 0.0, cfg, anchor=anchor)
        assert td.base.a == 1.0
        assert td.base.x0 == pytest.approx(anchor - 0.5, abs=1e-12)
        assert td.support.upper == pytest.approx(anchor + 0.5, abs=1e-12)

    def test_piecewise_widths_against_map_oracle(self, staircase, cfg):
        alpha = 2.0
        td = ds.transform(staircase, alpha, cfg)
        for i, (h, w) in enumerate(staircase.steps):
            lo, hi = staircase.edges[i], staircase.edges[i + 1]
            width_oracle = quad(lambda t: float(staircase.pdf(t))
                                ** (1.0 - alpha), lo + 1e-12,
                                hi - 1e-12)[0]
            assert td.base.widths[i] == pytest.approx(width_oracle, rel=1e-7)
            assert td.base.heights[i] == pytest.approx(h ** alpha)

    def test_negative_alpha_flagged_and_normalized(self, cfg):
        td = ds.transform(ds.Exponential(), -1.0, cfg)
        assert isinstance(td.base, ds.QExponential)
        assert td.base.q == pytest.approx(3.0)
        assert td.base.beyond_standard_range
        assert td.support.compact()
        total = quad(lambda y: float(td.pdf(y)), 0.0, td.support.upper,
                     points=[td.support.upper * 0.999], limit=400)[0]
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_support_length_is_moment_of_one_minus_alpha(self, staircase,
                                                         cfg):
        for d in (staircase, ds.Uniform(2.0), ds.Exponential(),
                  ds.PowerLawTail(3.0, 1.0)):
            for alpha in (0.5, 2.0):
                td = ds.transform(d, alpha, cfg)
                length = td.support.length()
                w = ds.entropic_moment(d, 1.0 - alpha, cfg)
                if math.isinf(w):
                    assert math.isinf(length)
                else:
                    assert length == pytest.approx(w, abs=1e-6)


class TestNumericVersusClosed:
    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_exponential_numeric_path(self, alpha, cfg):
        tn = ds.transform(ds.Exponential(), alpha, cfg, force_numeric=True)
        tc = ds.transform(ds.Exponential(), alpha, cfg)
        assert isinstance(tn.base, ds.NumericTransformed)
        hi = min(tn.support.upper, ds.quantile(tc.base, 1 - 1e-6, cfg))
        ys = np.linspace(1e-9, hi, 256)
        assert np.abs(tn.pdf(ys) - tc.pdf(ys)).max() < 1e-6

    def test_qexp_numeric_path(self, cfg):
        tn = ds.transform(ds.QExponential(1.5), 2.0, cfg, force_numeric=True)
        tc = ds.transform(ds.QExponential(1.5), 2.0, cfg)
        ys = np.linspace(1e-9, ds.quantile(tc.base, 1 - 1e-6, cfg), 256)
        assert np.abs(tn.pdf(ys) - tc.pdf(ys)).max() < 1e-6


class TestInverseTransform:
    def test_exponential_roundtrip(self, cfg):
        td = ds.transform(ds.Exponential(), 2.0, cfg)
        back = ds.inverse_transform(td)
        assert isinstance(back, ds.Exponential)

    def test_uniform_roundtrip(self, cfg):
        td = ds.transform(ds.Uniform(2.0), 3.0, cfg)
        assert td.base.a == pytest.approx(8.0)
        back = ds.inverse_transform(td)
        assert back.a == pytest.approx(2.0)

    def test_qexp_follows_parameter_algebra(self, cfg):
        # deforming q=1 by alpha=2 gives q=1.5, so undoing a q=1.5 result
        # with provenance alpha=2 lands exactly on the exponential
        src = ds.QExponential(1.5)
        td = ds.transform(src, 2.0, cfg)
        assert td.base.q == pytest.approx(1.75)
        back = ds.inverse_transform(td)
        assert back.q == pytest.approx(1.5, abs=1e-12)
        td2 = ds.TransformedDensity(ds.QExponential(1.5), ds.Exponential(),
                                    2.0, ds.y_map(ds.Exponential(), 2.0, cfg))
        assert isinstance(ds.inverse_transform(td2), ds.Exponential)

    def test_pointwise_recovery(self, staircase, cfg):
        td = ds.transform(staircase, 2.0, cfg)
        back = ds.inverse_transform(td)
        xs = np.linspace(0.0, 1.0, 101)
        assert np.allclose(back.pdf(xs), staircase.pdf(xs), atol=1e-12)

    def test_alpha_zero_not_invertible(self, staircase, cfg):
        td = ds.transform(staircase, 0.0, cfg)
        with pytest.raises(NotInvertible):
            ds.inverse_transform(td)

    def test_numeric_roundtrip(self, cfg):
        src = ds.PowerLawTail(3.0, 1.0)
        td = ds.transform(src, 2.0, cfg)
        back = ds.transform(td.base, 0.5, cfg)
        xs = np.geomspace(0.05, 30.0, 50)
        assert np.abs(back.pdf(xs) - src.pdf(xs)).max() < 1e-6


class TestStandardEscort:
    def test_exponential_stays_exponential(self, cfg):
        esc = ds.standard_escort(ds.Exponential(), 2.0, cfg)
        xs = np.linspace(0.0, 10.0, 50)
        assert np.allclose(esc.pdf(xs), 2.0 * np.exp(-2.0 * xs))
        assert esc.support.lower == 0.0 and math.isinf(esc.support.upper)

    def test_qexp_parameter_shift(self, cfg):
        src = ds.QExponential(1.5)
        esc = ds.standard_escort(src, 2.0, cfg)
        w2 = ds.entropic_moment(src, 2.0, cfg)
        ys = np.linspace(0.0, 30.0, 64)
        oracle = src.pdf(ys) ** 2 / w2
        assert np.allclose(esc.pdf(ys), oracle, atol=1e-13)
        assert isinstance(esc.base, ds.QExponential)
        assert esc.base.q == pytest.approx(1.25)

    def test_uniform_fixed_point(self, cfg):
        esc = ds.standard_escort(ds.Uniform(3.0, 1.0), 4.0, cfg)
        assert isinstance(esc, ds.Uniform)
        assert esc.a == 3.0 and esc.x0 == 1.0

    def test_powerlaw_multiplies_exponent(self, cfg):
        esc = ds.standard_escort(ds.PowerLawTail(3.0, 1.0), 2.0, cfg)
        assert isinstance(esc, ds.PowerLawTail)
        assert esc.beta == pytest.approx(6.0)

    def test_divergent_escort_rejected(self, cfg):
        with pytest.raises(DivergentMoment):
            ds.standard_escort(ds.Exponential(), -1.0, cfg)
        with pytest.raises(DivergentMoment):
            ds.standard_escort(ds.PowerLawTail(3.0, 1.0), 0.2, cfg)

    def test_staircase_renormalized_powers(self, staircase, cfg):
        esc = ds.standard_escort(staircase, 2.0, cfg)
        w2 = 7.0 / 6.0
        assert np.allclose(esc.heights, staircase.heights ** 2 / w2)


class TestScaled:
    def test_uniform_shrinks(self):
        out = ds.scaled(ds.Uniform(2.0), 2.0)
        assert isinstance(out, ds.Uniform) and out.a == 1.0

    def test_exponential_at_origin(self):
        assert ds.evaluate(ds.scaled(ds.Exponential(), 2.0), 0.0) == 2.0

    @given(st.floats(min_value=0.1, max_value=8.0),
           st.floats(min_value=-1.0, max_value=12.0))
    @settings(max_examples=60, deadline=None)
    def test_definition_everywhere(self, a, x):
        for d in (ds.Exponential(), ds.QExponential(1.5),
                  ds.PowerLawTail(3.0, 1.0), ds.Uniform(2.0, 0.0)):
            lhs = ds.evaluate(ds.scaled(d, a), x)
            rhs = a * ds.evaluate(d, a * x)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_double_scaling_collapses(self):
        out = ds.scaled(ds.scaled(ds.Exponential(), 2.0), 3.0)
        assert isinstance(out, ds.Scaled) and out.factor == 6.0


class TestProvenanceSerialization:
    def test_transformed_density_annotated(self, staircase, cfg):
        td = ds.transform(staircase, 2.0, cfg)
        data = td.to_dict()
        assert data["kind"] == "piecewise"
        assert data["provenance"] == {"source_kind": "piecewise",
                                      "alpha": 2.0}
        # the annotated payload still loads as a plain density
        again = ds.density_from_dict({k: v for k, v in data.items()
                                      if k != "provenance"})
        xs = np.linspace(0.0, 1.2, 30)
        assert np.allclose(again.pdf(xs), td.pdf(xs))

    def test_flagged_qexp_roundtrip(self, cfg):
        td = ds.transform(ds.Exponential(), -1.0, cfg)
        data = td.to_dict()
        assert data["beyond_standard_range"] is True
        assert data["provenance"]["alpha"] == -1.0


class TestCustomAnchor:
    def test_anchor_only_translates(self, cfg):
        base = ds.transform(ds.Exponential(), 2.0, cfg)
        moved = ds.transform(ds.Exponential(), 2.0, cfg, anchor=1.0)
        shift = moved.ymap.forward(0.0)
        ys = np.linspace(0.0, 5.0, 40)
        assert np.abs(moved.pdf(ys + shift) - base.pdf(ys)).max() < 1e-8


class TestTransformFailure:
    def test_vanishing_edge_with_strong_alpha(self, cfg):
        pts = [(0.0, 0.0), (0.5, 2.0), (1.0, 0.0)]
        d = ds.Tabulated(pts)
        with pytest.raises(TransformFailed) as exc:
            ds.transform(d, 2.5, cfg)
        assert exc.value.interval is not None

    def test_moderate_alpha_still_fine(self, cfg):
        pts = [(0.0, 0.0), (0.5, 2.0), (1.0, 0.0)]
        d = ds.Tabulated(pts)
        td = ds.transform(d, 1.5, cfg)
        assert td.support.compact()
