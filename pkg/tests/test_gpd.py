"""Distribution-level tests: densities, CDF/quantile, sampling."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import kstest

from gpdtail import GpdParams, ParameterError, cdf, log_pdf, pdf, quantile, sample, survival

from oracles import gpd_pdf_direct

GAMMA_GRID = (-0.4, -0.2, 0.0, 0.3, 0.8)
SIGMA_GRID = (0.008, 1.0, 5.0)


class TestParams:
    def test_sigma_must_be_positive(self):
        with pytest.raises(ParameterError):
            GpdParams(0.0, 0.0, 0.3)
        with pytest.raises(ParameterError):
            GpdParams(0.0, -1.0, 0.3)

    def test_upper_endpoint(self):
        assert GpdParams(0.0, 1.0, -0.5).upper_endpoint == 2.0
        assert GpdParams(0.0, 1.0, 0.3).upper_endpoint == math.inf
        assert GpdParams(5.0, 2.0, -0.25).upper_endpoint == 13.0


class TestPdf:
    def test_exponential_at_origin(self):
        assert pdf(GpdParams(0, 1, 0), 0.0) == pytest.approx(1.0)

    def test_unit_shape(self):
        assert pdf(GpdParams(0, 1, 1), 1.0) == pytest.approx(0.25)

    def test_off_support_beyond_endpoint(self):
        assert pdf(GpdParams(0, 1, -0.5), 3.0) == 0.0

    def test_below_location_is_zero(self):
        assert pdf(GpdParams(2.0, 1, 0.3), 1.0) == 0.0

    def test_endpoint_excluded_for_negative_gamma(self):
        assert pdf(GpdParams(0, 1, -0.5), 2.0) == 0.0

    def test_matches_direct_formula(self):
        x = np.linspace(0.0, 5.0, 101)
        for gamma in GAMMA_GRID:
            p = GpdParams(0.0, 1.0, gamma)
            np.testing.assert_allclose(pdf(p, x), gpd_pdf_direct(x, 0.0, 1.0, gamma),
                                       rtol=1e-12, atol=0.0)

    def test_scale_equivariance(self):
        x = np.linspace(0.1, 4.0, 40)
        for c in (0.008, 10.0):
            for gamma in GAMMA_GRID:
                left = pdf(GpdParams(0, c * 1.0, gamma), c * x) * c
                right = pdf(GpdParams(0, 1.0, gamma), x)
                np.testing.assert_allclose(left, right, rtol=1e-12)

    def test_normalization_by_quadrature(self):
        for gamma in GAMMA_GRID:
            for sigma in SIGMA_GRID:
                p = GpdParams(0.0, sigma, gamma)
                upper = p.upper_endpoint if gamma < 0 else np.inf
                total, err = quad(lambda x: pdf(p, x), 0.0, upper, limit=200)
                assert total == pytest.approx(1.0, abs=1e-6), (gamma, sigma)


class TestLogPdf:
    def test_unit_shape(self):
        assert log_pdf(GpdParams(0, 1, 1), 1.0) == pytest.approx(-2 * math.log(2), abs=1e-12)

    def test_exponential(self):
        assert log_pdf(GpdParams(0, 2, 0), 2.0) == pytest.approx(-math.log(2) - 1, abs=1e-12)

    def test_off_support(self):
        assert log_pdf(GpdParams(0, 1, -0.5), 3.0) == -math.inf

    def test_agrees_with_log_of_pdf(self):
        x = np.linspace(0.0, 6.0, 301)
        for gamma in GAMMA_GRID:
            for sigma in (0.008, 1.0):
                p = GpdParams(0.0, sigma, gamma)
                dens = np.atleast_1d(pdf(p, x))
                mask = dens > 1e-300
                np.testing.assert_allclose(
                    np.atleast_1d(log_pdf(p, x))[mask], np.log(dens[mask]), atol=1e-10)

    def test_continuity_near_gamma_zero(self):
        x = np.linspace(0.0, 8.0, 200)
        base = pdf(GpdParams(0, 1, 0.0), x)
        for eps in (1e-9, -1e-9):
            nearby = pdf(GpdParams(0, 1, eps), x)
            assert np.max(np.abs(nearby - base)) < 1e-6


class TestCdf:
    def test_unit_shape_median(self):
        assert cdf(GpdParams(0, 1, 1), 1.0) == pytest.approx(0.5)

    def test_exponential_median(self):
        assert cdf(GpdParams(0, 1, 0), math.log(2)) == pytest.approx(0.5)

    def test_lower_endpoint(self):
        assert cdf(GpdParams(5, 1, 0.3), 5.0) == 0.0
        assert cdf(GpdParams(5, 1, 0.3), 4.0) == 0.0

    def test_saturates_at_negative_gamma_endpoint(self):
        p = GpdParams(0, 1, -0.5)
        assert cdf(p, 2.0) == 1.0
        assert cdf(p, 5.0) == 1.0

    def test_survival_complements_cdf(self):
        x = np.linspace(0.0, 6.0, 50)
        for gamma in GAMMA_GRID:
            p = GpdParams(0.0, 1.0, gamma)
            np.testing.assert_allclose(survival(p, x), 1.0 - np.atleast_1d(cdf(p, x)), atol=1e-12)


class TestQuantile:
    def test_unit_shape(self):
        assert quantile(GpdParams(0, 1, 1), 0.5) == pytest.approx(1.0)

    def test_derived_value(self):
        # (0.25**-0.3 - 1) * 2 / 0.3, survival-checked to return exactly 0.25
        assert quantile(GpdParams(0, 2, 0.3), 0.75) == pytest.approx(3.4381104434026533, rel=1e-12)
        assert survival(GpdParams(0, 2, 0.3), 3.4381104434026533) == pytest.approx(0.25, rel=1e-12)

    def test_exponential_with_location(self):
        assert quantile(GpdParams(10, 1, 0), 1 - math.exp(-1)) == pytest.approx(11.0)

    def test_domain_errors(self):
        p = GpdParams(0, 1, 0.3)
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ParameterError):
                quantile(p, bad)

    def test_round_trip_both_ways(self):
        probs = np.linspace(0.001, 0.999, 97)
        for gamma in GAMMA_GRID:
            p = GpdParams(0.0, 1.0, gamma)
            for prob in probs:
                x = quantile(p, prob)
                assert cdf(p, x) == pytest.approx(prob, abs=1e-12)
            for x in np.linspace(0.01, 2.0 if gamma < 0 else 8.0, 23):
                prob = cdf(p, x)
                if 0.0 < prob < 1.0:
                    assert quantile(p, prob) == pytest.approx(x, rel=1e-9)


class TestSample:
    def test_empty(self, rng):
        assert sample(GpdParams(0, 1, 0.3), 0, rng).size == 0

    def test_negative_count(self, rng):
        with pytest.raises(ParameterError):
            sample(GpdParams(0, 1, 0.3), -1, rng)

    def test_deterministic_given_seed(self):
        p = GpdParams(0, 1, 0.3)
        a = sample(p, 100, np.random.default_rng(7))
        b = sample(p, 100, np.random.default_rng(7))
        np.testing.assert_array_equal(a, b)

    def test_ks_against_analytic_cdf(self):
        p = GpdParams(0.0, 1.0, 0.3)
        x = sample(p, 10_000, np.random.default_rng(11))
        result = kstest(x, lambda v: cdf(p, v))
        assert result.pvalue > 0.01

    def test_bounded_support_for_negative_gamma(self):
        x = sample(GpdParams(0, 1, -0.5), 10_000, np.random.default_rng(3))
        assert np.all(x >= 0.0)
        assert np.all(x < 2.0)

    def test_sample_mean_matches_theory(self):
        # E[X] = sigma/(1-gamma); sd = sigma/((1-gamma)*sqrt(1-2*gamma))
        p = GpdParams(0.0, 1.0, 0.3)
        n = 100_000
        x = sample(p, n, np.random.default_rng(5))
        mean_true = 1.0 / 0.7
        sd_true = 1.0 / (0.7 * math.sqrt(0.4))
        assert abs(x.mean() - mean_true) < 3 * sd_true / math.sqrt(n)
