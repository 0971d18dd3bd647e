"""Peaks-over-threshold tail risk with the Generalized Pareto Distribution.

Fits GPD tails to loss exceedances (method of moments, probability
weighted moments, maximum likelihood, and objective-Bayes posterior
mode/mean via Metropolis MCMC), computes VaR and expected shortfall with
full posterior uncertainty bands, and ships threshold diagnostics plus a
Monte Carlo estimator-comparison harness.
"""

from .bayes import (
    McmcConfig,
    PosteriorDraws,
    credible_interval,
    log_posterior,
    log_prior,
    metropolis,
    posterior_mean,
    posterior_mode,
)
from .datasets import synthetic_losses, synthetic_prices
from .errors import (
    DegenerateMomentsError,
    EmptyChainError,
    GpdTailError,
    HistoricalLimitError,
    HorizonTooShortError,
    InfiniteMeanError,
    InsufficientDataError,
    InsufficientExceedancesError,
    ParameterError,
)
from .estimators import (
    ExceedanceSample,
    FitResult,
    fit_mle,
    fit_mom,
    fit_pwm,
    log_likelihood,
)
from .gpd import GpdParams, cdf, log_pdf, pdf, quantile, sample, survival
from .model import PotTailModel
from .risk import (
    RiskCurve,
    RiskPoint,
    RiskQuery,
    bayes_risk_curve,
    es_closed_form,
    historical_var,
    normal_var,
    predictive_sample,
    rescale_alpha,
    var_closed_form,
)
from .series import LossSeries, PriceSeries, log_losses, read_losses, read_prices
from .study import (
    ALL_ESTIMATORS,
    StudyReport,
    StudyScenario,
    default_scenarios,
    rmse,
    run_study,
)
from .threshold import (
    SweepEntry,
    ThresholdSweep,
    extract_exceedances,
    fit_and_curve,
    mean_excess_data,
    pareto_quantile_data,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_ESTIMATORS",
    "DegenerateMomentsError",
    "EmptyChainError",
    "ExceedanceSample",
    "FitResult",
    "GpdParams",
    "GpdTailError",
    "HistoricalLimitError",
    "HorizonTooShortError",
    "InfiniteMeanError",
    "InsufficientDataError",
    "InsufficientExceedancesError",
    "LossSeries",
    "McmcConfig",
    "ParameterError",
    "PosteriorDraws",
    "PotTailModel",
    "PriceSeries",
    "RiskCurve",
    "RiskPoint",
    "RiskQuery",
    "StudyReport",
    "StudyScenario",
    "SweepEntry",
    "ThresholdSweep",
    "bayes_risk_curve",
    "cdf",
    "credible_interval",
    "default_scenarios",
    "es_closed_form",
    "extract_exceedances",
    "fit_and_curve",
    "fit_mle",
    "fit_mom",
    "fit_pwm",
    "historical_var",
    "log_likelihood",
    "log_losses",
    "log_pdf",
    "log_posterior",
    "log_prior",
    "mean_excess_data",
    "metropolis",
    "normal_var",
    "pareto_quantile_data",
    "pdf",
    "posterior_mean",
    "posterior_mode",
    "predictive_sample",
    "quantile",
    "read_losses",
    "read_prices",
    "rescale_alpha",
    "rmse",
    "run_study",
    "sample",
    "survival",
    "sweep",
    "synthetic_losses",
    "synthetic_prices",
    "var_closed_form",
]
