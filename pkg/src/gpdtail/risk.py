"""Tail risk measures: closed-form VaR and ES, posterior risk curves with
credible bands, and the historical / Normal baselines.

For a GPD(mu, sigma, gamma) loss tail,

    VaR(1 - alpha) = (alpha**-gamma - 1) * sigma / gamma + mu
    ES(1 - alpha)  = VaR(1 - alpha) + sigma * alpha**-gamma / (1 - gamma)

where alpha is the exceedance probability *within the modeled tail*.  A
per-day tail probability is converted onto that scale by multiplying by
n_total/n_exceed; the conversion fails (horizon too short) when the result
reaches 1, which is the regime where the empirical estimate applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .bayes import PosteriorDraws, credible_interval
from .errors import (
    HistoricalLimitError,
    HorizonTooShortError,
    InfiniteMeanError,
    InsufficientDataError,
    ParameterError,
)
from .estimators import ExceedanceSample
from .gpd import SMALL_GAMMA, GpdParams, survival
from .validation import as_float_array, check_probability


def var_closed_form(p: GpdParams, alpha: float) -> float:
    """Loss exceeded with probability ``alpha``: the (1-alpha) quantile."""
    alpha = check_probability(alpha, "alpha")
    if abs(p.gamma) < SMALL_GAMMA:
        return p.mu - p.sigma * math.log(alpha)
    return p.mu + p.sigma * math.expm1(-p.gamma * math.log(alpha)) / p.gamma


def es_closed_form(p: GpdParams, alpha: float) -> float:
    """Expected loss given the loss exceeds VaR(1 - alpha).

    Requires gamma < 1; beyond that the excess distribution has no mean.
    """
    alpha = check_probability(alpha, "alpha")
    if p.gamma >= 1.0:
        raise InfiniteMeanError(f"expected shortfall undefined for gamma={p.gamma} >= 1")
    v = var_closed_form(p, alpha)
    if abs(p.gamma) < SMALL_GAMMA:
        return v + p.sigma
    return v + p.sigma * math.exp(-p.gamma * math.log(alpha)) / (1.0 - p.gamma)


def rescale_alpha(alpha_day: float, s: ExceedanceSample) -> float:
    """Convert a per-day tail probability to the exceedance-sample scale."""
    if not np.isfinite(alpha_day) or alpha_day <= 0.0:
        raise ParameterError(f"alpha_day must be positive, got {alpha_day!r}")
    rescaled = alpha_day * s.n_total / s.n_exceed
    if rescaled >= 1.0:
        raise HorizonTooShortError(
            f"alpha_day={alpha_day} rescales to {rescaled:.4g} >= 1; "
            "the requested quantile is not in the modeled tail"
        )
    return rescaled


def historical_var(losses, alpha_day: float) -> float:
    """Empirical (1 - alpha_day) quantile of the loss series.

    Raises HistoricalLimitError when alpha_day < 1/(n+1): past that point the
    empirical curve has stagnated at the sample maximum.
    """
    losses = as_float_array(losses, "losses")
    if not np.isfinite(alpha_day) or not 0.0 < alpha_day < 1.0:
        raise ParameterError(f"alpha_day must lie in (0, 1), got {alpha_day!r}")
    if alpha_day < 1.0 / (losses.size + 1):
        raise HistoricalLimitError(
            f"alpha_day={alpha_day} is beyond the resolution of {losses.size} observations"
        )
    return float(np.quantile(losses, 1.0 - alpha_day))


def normal_var(losses, alpha_day: float) -> float:
    """VaR under a fitted Normal model for the full return series."""
    losses = as_float_array(losses, "losses", min_len=2)
    alpha_day = check_probability(alpha_day, "alpha_day")
    m = float(np.mean(losses))
    sd = float(np.std(losses, ddof=1))
    if sd <= 0.0:
        raise InsufficientDataError("loss series is degenerate (zero standard deviation)")
    return m + sd * float(norm.ppf(1.0 - alpha_day))


@dataclass(frozen=True)
class RiskQuery:
    """Horizons (trading days per expected exceedance) and a credible level.

    Horizons and daily tail probabilities encode the same thing
    (alpha_day = 1/horizon); build from probabilities with
    :meth:`from_alpha_days`.
    """

    horizons: tuple[float, ...]
    level: float = 0.95

    def __post_init__(self):
        horizons = tuple(float(h) for h in np.atleast_1d(self.horizons))
        if not horizons:
            raise ParameterError("at least one horizon is required")
        for h in horizons:
            if not np.isfinite(h) or h <= 1.0:
                raise ParameterError(f"horizons must exceed 1 day, got {h!r}")
        object.__setattr__(self, "horizons", horizons)
        check_probability(self.level, "level")

    @classmethod
    def from_alpha_days(cls, alpha_days, level: float = 0.95) -> "RiskQuery":
        horizons = [1.0 / check_probability(a, "alpha_day") for a in np.atleast_1d(alpha_days)]
        return cls(horizons=tuple(horizons), level=level)

    @property
    def alpha_day_values(self) -> tuple[float, ...]:
        return tuple(1.0 / h for h in self.horizons)


@dataclass(frozen=True)
class RiskPoint:
    """Risk measures at one horizon.  ``var_hist``/``var_normal`` are None
    when the corresponding baseline is unavailable."""

    horizon_days: float
    alpha_day: float
    var_mean: float
    var_lo: float
    var_hi: float
    es_mean: float
    es_lo: float
    es_hi: float
    var_hist: float | None = None
    var_normal: float | None = None


@dataclass(frozen=True)
class RiskCurve:
    """Per-horizon VaR/ES point estimates with credible bands.

    ``es_excluded_draws`` counts posterior draws with gamma >= 1 that were
    excluded from the ES columns (they still contribute to VaR).
    """

    points: tuple[RiskPoint, ...]
    level: float
    es_excluded_draws: int = 0

    def __len__(self) -> int:
        return len(self.points)


def _per_draw_var(sigmas: np.ndarray, gammas: np.ndarray, mu: float, alpha: float) -> np.ndarray:
    log_a = math.log(alpha)
    small = np.abs(gammas) < SMALL_GAMMA
    safe = np.where(small, 1.0, gammas)
    general = mu + sigmas * np.expm1(-safe * log_a) / safe
    return np.where(small, mu - sigmas * log_a, general)


def _per_draw_es(var_draws, sigmas, gammas, alpha: float) -> np.ndarray:
    log_a = math.log(alpha)
    small = np.abs(gammas) < SMALL_GAMMA
    return var_draws + np.where(small, sigmas, sigmas * np.exp(-gammas * log_a) / (1.0 - gammas))


def _mixture_var(sigmas, gammas, mu: float, alpha: float, per_draw: np.ndarray) -> float:
    """Quantile of the posterior-predictive mixture: solve mean_j S_j(v) = alpha."""
    lo = float(np.min(per_draw))
    hi = float(np.max(per_draw))
    if hi - lo < 1e-300:
        return lo
    params = [GpdParams(mu, s, g) for s, g in zip(sigmas, gammas)]

    def mix_survival(v: float) -> float:
        return float(np.mean([survival(p, v) for p in params]))

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mix_survival(mid) > alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def bayes_risk_curve(
    d: PosteriorDraws,
    s: ExceedanceSample,
    q: RiskQuery,
    losses=None,
    point_method: str = "draw_mean",
) -> RiskCurve:
    """Risk curve from posterior draws.

    For every draw and horizon the closed forms are evaluated at
    (mu=threshold, sigma_j, gamma_j) with the rescaled alpha; the point
    curve is the mean across draws (or, with ``point_method="mixture"``,
    the quantile of the posterior-predictive mixture) and the bands are
    equal-tailed credible intervals at ``q.level``.  When the full loss
    series is supplied, the historical and Normal baselines are filled in;
    the historical entry is left empty past the data limit.
    """
    if point_method not in ("draw_mean", "mixture"):
        raise ParameterError(f"unknown point_method {point_method!r}")
    if len(d) == 0:
        raise ParameterError("posterior draws are empty")
    sigmas = d.sigmas
    gammas = d.gammas
    es_ok = gammas < 1.0
    excluded = int(np.sum(~es_ok))

    loss_arr = None
    if losses is not None:
        loss_arr = as_float_array(losses, "losses")

    points = []
    for h in q.horizons:
        alpha_day = 1.0 / h
        alpha = rescale_alpha(alpha_day, s)
        var_draws = _per_draw_var(sigmas, gammas, s.threshold, alpha)
        var_lo, var_hi = credible_interval(var_draws, q.level)
        if es_ok.any():
            es_draws = _per_draw_es(var_draws[es_ok], sigmas[es_ok], gammas[es_ok], alpha)
            es_lo, es_hi = credible_interval(es_draws, q.level)
            es_mean = float(np.mean(es_draws))
        else:
            es_mean = es_lo = es_hi = math.nan

        if point_method == "mixture":
            var_mean = _mixture_var(sigmas, gammas, s.threshold, alpha, var_draws)
        else:
            var_mean = float(np.mean(var_draws))

        var_hist = None
        var_norm = None
        if loss_arr is not None:
            try:
                var_hist = historical_var(loss_arr, alpha_day)
            except HistoricalLimitError:
                var_hist = None
            var_norm = normal_var(loss_arr, alpha_day)

        points.append(RiskPoint(
            horizon_days=h,
            alpha_day=alpha_day,
            var_mean=var_mean,
            var_lo=var_lo,
            var_hi=var_hi,
            es_mean=es_mean,
            es_lo=es_lo,
            es_hi=es_hi,
            var_hist=var_hist,
            var_normal=var_norm,
        ))
    return RiskCurve(points=tuple(points), level=q.level, es_excluded_draws=excluded)


def predictive_sample(d: PosteriorDraws, threshold: float, n_per_draw: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Posterior-predictive draws: ``n_per_draw`` GPD samples per posterior draw.

    Realizes the predictive distribution by composition: parameters from
    the posterior, then data from the sampling model.
    """
    if len(d) == 0:
        raise ParameterError("posterior draws are empty")
    if n_per_draw < 0:
        raise ParameterError("n_per_draw must be >= 0")
    if n_per_draw == 0:
        return np.empty(0)
    sigmas = d.sigmas[:, None]
    gammas = d.gammas[:, None]
    u = rng.uniform(np.nextafter(0.0, 1.0), 1.0, size=(len(d), n_per_draw))
    log_u = np.log(u)
    small = np.abs(gammas) < SMALL_GAMMA
    safe = np.where(small, 1.0, gammas)
    general = threshold + sigmas * np.expm1(-safe * log_u) / safe
    out = np.where(small, threshold - sigmas * log_u, general)
    return out.ravel()
