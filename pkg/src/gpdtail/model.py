"""Scikit-learn style front end for the peaks-over-threshold pipeline.

``PotTailModel`` wraps threshold extraction, parameter estimation and risk
measurement behind the familiar estimator protocol: constructor parameters
are stored untouched, ``fit`` learns from a 1-D loss series and sets
trailing-underscore attributes, and ``get_params``/``set_params``/``clone``
work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .bayes import McmcConfig, credible_interval, metropolis, posterior_mean, posterior_mode
from .errors import ParameterError
from .estimators import FitResult, _check_consistent, fit_mle, fit_mom, fit_pwm
from .gpd import GpdParams, sample as gpd_sample
from .risk import RiskCurve, RiskQuery, bayes_risk_curve, es_closed_form, rescale_alpha, var_closed_form
from .threshold import extract_exceedances
from .validation import as_float_array

_METHODS = ("mom", "pwm", "mle", "mode", "mean")


class PotTailModel(BaseEstimator):
    """Peaks-over-threshold GPD tail model for a daily loss series.

    Parameters
    ----------
    threshold : float
        Loss level above which observations are modeled as GPD exceedances.
    method : {"mom", "pwm", "mle", "mode", "mean"}
        Point estimator.  "mode" and "mean" are Bayesian (posterior mode /
        posterior mean); "mean" also retains the full chain for bands.
    prior : {"mdi", "jeffreys", "uniform"}
        Prior for the Bayesian methods; ignored otherwise.
    n_draws, burn_in, thinning, adapt
        Metropolis chain settings (method="mean" only).
    level : float
        Credible level for intervals and risk bands.
    random_state : int
        Chain seed.

    Attributes
    ----------
    sample_ : ExceedanceSample
        Threshold, excesses and counts extracted by ``fit``.
    result_ : FitResult
        Point estimate with convergence/consistency flags.
    sigma_, gamma_ : float
        Estimated scale and shape.
    draws_ : PosteriorDraws or None
        Posterior sample (method="mean" only).
    """

    def __init__(
        self,
        threshold: float = 0.0,
        method: str = "mean",
        prior: str = "mdi",
        n_draws: int = 10_000,
        burn_in: int = 2_000,
        thinning: int = 1,
        adapt: bool = True,
        level: float = 0.95,
        random_state: int = 0,
    ):
        self.threshold = threshold
        self.method = method
        self.prior = prior
        self.n_draws = n_draws
        self.burn_in = burn_in
        self.thinning = thinning
        self.adapt = adapt
        self.level = level
        self.random_state = random_state

    def _mcmc_config(self) -> McmcConfig:
        return McmcConfig(
            n_draws=self.n_draws,
            burn_in=self.burn_in,
            thinning=self.thinning,
            seed=self.random_state,
            adapt=self.adapt,
        )

    def fit(self, X, y=None) -> "PotTailModel":
        """Fit the tail model to a loss series (1-D array or single column)."""
        if self.method not in _METHODS:
            raise ParameterError(f"unknown method {self.method!r}; expected one of {_METHODS}")
        losses = as_float_array(X, "X", min_len=2)
        self.losses_ = losses
        self.sample_ = extract_exceedances(losses, self.threshold)
        self.draws_ = None
        if self.method == "mom":
            self.result_ = fit_mom(self.sample_)
        elif self.method == "pwm":
            self.result_ = fit_pwm(self.sample_)
        elif self.method == "mle":
            self.result_ = fit_mle(self.sample_)
        elif self.method == "mode":
            self.result_ = posterior_mode(self.sample_, self.prior)
        else:
            self.draws_ = metropolis(self.sample_, self.prior, self._mcmc_config())
            sigma_mean, gamma_mean = posterior_mean(self.draws_)
            self.result_ = FitResult(
                sigma_hat=sigma_mean,
                gamma_hat=gamma_mean,
                method=f"mean/{self.prior}",
                converged=True,
                data_consistent=_check_consistent(self.sample_.excesses, sigma_mean, gamma_mean),
            )
        self.sigma_ = self.result_.sigma_hat
        self.gamma_ = self.result_.gamma_hat
        self.n_features_in_ = 1
        return self

    def _fitted_params(self) -> GpdParams:
        return GpdParams(self.sample_.threshold, self.sigma_, self.gamma_)

    def var(self, alpha_day: float) -> float:
        """Point VaR for a per-day tail probability (e.g. 0.005 = once in 200 days)."""
        check_is_fitted(self, "result_")
        alpha = rescale_alpha(alpha_day, self.sample_)
        return var_closed_form(self._fitted_params(), alpha)

    def es(self, alpha_day: float) -> float:
        """Point expected shortfall for a per-day tail probability."""
        check_is_fitted(self, "result_")
        alpha = rescale_alpha(alpha_day, self.sample_)
        return es_closed_form(self._fitted_params(), alpha)

    def predict(self, X) -> np.ndarray:
        """Point VaR for each horizon in ``X`` (trading days per expected exceedance)."""
        check_is_fitted(self, "result_")
        horizons = as_float_array(X, "X")
        return np.array([self.var(1.0 / h) for h in horizons])

    def risk_curve(self, horizons, level: float | None = None) -> RiskCurve:
        """Full risk curve with credible bands (requires method="mean")."""
        check_is_fitted(self, "result_")
        if self.draws_ is None:
            raise ParameterError('risk_curve needs posterior draws; fit with method="mean"')
        q = RiskQuery(horizons=tuple(horizons), level=self.level if level is None else level)
        return bayes_risk_curve(self.draws_, self.sample_, q, losses=self.losses_)

    def parameter_intervals(self) -> dict:
        """Equal-tailed credible intervals for sigma and gamma (method="mean")."""
        check_is_fitted(self, "result_")
        if self.draws_ is None:
            raise ParameterError('parameter_intervals needs posterior draws; fit with method="mean"')
        return {
            "sigma": credible_interval(self.draws_.sigmas, self.level),
            "gamma": credible_interval(self.draws_.gammas, self.level),
        }

    def sample(self, n: int, random_state: int | None = None) -> np.ndarray:
        """Draw losses from the fitted tail model."""
        check_is_fitted(self, "result_")
        rng = np.random.default_rng(self.random_state if random_state is None else random_state)
        return gpd_sample(self._fitted_params(), n, rng)
