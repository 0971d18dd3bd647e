"""Exceedance extraction, diagnostics data and the threshold sweep."""

import math

import numpy as np
import pytest

from gpdtail import (
    GpdParams,
    InsufficientDataError,
    InsufficientExceedancesError,
    McmcConfig,
    RiskQuery,
    extract_exceedances,
    fit_and_curve,
    mean_excess_data,
    pareto_quantile_data,
    sample,
    sweep,
    synthetic_losses,
)


class TestExtractExceedances:
    def test_basic(self):
        s = extract_exceedances([1.0, 2.0, 3.0, 4.0], 2.0)
        np.testing.assert_allclose(np.sort(s.excesses), [1.0, 2.0])
        assert s.n_total == 4
        assert s.n_exceed == 2
        assert s.threshold == 2.0

    def test_strict_inequality_leaves_too_few(self):
        with pytest.raises(InsufficientExceedancesError):
            extract_exceedances([0.01, 0.05, 0.033], 0.033)

    def test_count_matches_linear_scan(self):
        losses = synthetic_losses(seed=5)
        s = extract_exceedances(losses, 0.033)
        assert s.n_exceed == sum(1 for x in losses if x > 0.033)

    def test_shift_identity(self):
        losses = synthetic_losses(n_total=500, n_tail=60, seed=2)
        threshold = 0.033
        s = extract_exceedances(losses, threshold)
        assert np.min(s.excesses) > 0.0
        above = losses[losses > threshold]
        assert s.excesses.sum() + s.n_exceed * threshold == pytest.approx(above.sum(), rel=1e-12)


class TestMeanExcess:
    def test_small_example(self):
        u, e = mean_excess_data([1.0, 2.0, 3.0, 4.0])
        np.testing.assert_allclose(u, [1.0, 2.0, 3.0])
        np.testing.assert_allclose(e, [2.0, 1.5, 1.0])

    def test_positive_and_decreasing_counts(self):
        losses = synthetic_losses(n_total=400, n_tail=50, seed=3)
        u, e = mean_excess_data(losses)
        assert np.all(e > 0.0)
        counts = [np.sum(losses > ui) for ui in u]
        assert np.all(np.diff(counts) < 0)

    def test_degenerate_input(self):
        with pytest.raises(InsufficientDataError):
            mean_excess_data([2.0, 2.0, 2.0])

    def test_gpd_slope(self):
        # For GPD data, e(u) is linear with slope gamma/(1-gamma) = 3/7.
        x = sample(GpdParams(0.0, 1.0, 0.3), 10_000, np.random.default_rng(29))
        u, e = mean_excess_data(x)
        lo, hi = int(0.1 * u.size), int(0.9 * u.size)
        slope = np.polyfit(u[lo:hi], e[lo:hi], 1)[0]
        assert abs(slope - 0.3 / 0.7) < 0.1


class TestParetoQuantile:
    def test_two_points(self):
        # i-th largest pairs with ln((n+1)/i): (ln 3, 2) then (ln 1.5, 1)
        lq, lx = pareto_quantile_data([math.e, math.e ** 2])
        np.testing.assert_allclose(lq, [math.log(3.0), math.log(1.5)])
        np.testing.assert_allclose(lx, [2.0, 1.0])

    def test_non_positive_omitted(self):
        lq, lx = pareto_quantile_data([-0.2, 0.0, math.e, math.e ** 2])
        assert lq.size == 2
        np.testing.assert_allclose(lx, [2.0, 1.0])

    def test_single_positive_loss(self):
        with pytest.raises(InsufficientDataError):
            pareto_quantile_data([-1.0, 3.0])
        with pytest.raises(InsufficientDataError):
            pareto_quantile_data([-1.0, -2.0])

    def test_strict_pareto_slope(self):
        # X = U**-0.5 is strict Pareto with index gamma = 0.5; the upper-tail
        # regression slope of the plot recovers it.
        u = np.random.default_rng(41).uniform(size=10_000)
        x = u ** -0.5
        lq, lx = pareto_quantile_data(x)
        k = 1000  # upper 10% = smallest i = first entries
        slope = np.polyfit(lq[:k], lx[:k], 1)[0]
        assert abs(slope - 0.5) < 0.05


@pytest.fixture(scope="module")
def losses():
    return synthetic_losses(n_total=1000, n_tail=80, threshold=0.03,
                            tail_sigma=0.008, tail_gamma=0.3, seed=11)


class TestSweep:
    def test_single_threshold_equals_pipeline(self, losses):
        cfg = McmcConfig(n_draws=500, burn_in=300, seed=21)
        q = RiskQuery(horizons=(100.0, 200.0))
        result = sweep(losses, [0.03], "mdi", cfg, q)
        assert len(result) == 1
        entry = result.entries[0]
        assert entry.error is None
        # the sweep derives the entry seed from (master seed, index 0)
        from gpdtail.threshold import _derived_seed
        from dataclasses import replace
        direct_cfg = replace(cfg, seed=_derived_seed(21, 0))
        _, draws, fit, curve = fit_and_curve(losses, 0.03, "mdi", direct_cfg, q)
        np.testing.assert_array_equal(entry.draws.draws, draws.draws)
        assert entry.fit.sigma_hat == fit.sigma_hat
        assert [p.var_mean for p in entry.curve.points] == [p.var_mean for p in curve.points]

    def test_low_exceedance_threshold_flagged_not_fatal(self, losses):
        cfg = McmcConfig(n_draws=300, burn_in=200, seed=22)
        q = RiskQuery(horizons=(100.0,))
        result = sweep(losses, [0.03, losses.max() - 1e-9], "mdi", cfg, q)
        assert result.entries[0].error is None
        assert result.entries[1].error is not None
        assert result.entries[1].curve is None

    def test_deterministic(self, losses):
        cfg = McmcConfig(n_draws=300, burn_in=200, seed=23)
        q = RiskQuery(horizons=(100.0, 200.0))
        a = sweep(losses, [0.025, 0.03], "mdi", cfg, q)
        b = sweep(losses, [0.025, 0.03], "mdi", cfg, q)
        for ea, eb in zip(a.entries, b.entries):
            np.testing.assert_array_equal(ea.draws.draws, eb.draws.draws)
            assert [p.var_mean for p in ea.curve.points] == [p.var_mean for p in eb.curve.points]

    def test_exceedance_counts_decrease_with_threshold(self, losses):
        cfg = McmcConfig(n_draws=200, burn_in=100, seed=24)
        q = RiskQuery(horizons=(100.0,))
        result = sweep(losses, [0.02, 0.025, 0.03], "mdi", cfg, q)
        counts = [e.n_exceed for e in result.entries]
        assert counts[0] > counts[1] > counts[2]
