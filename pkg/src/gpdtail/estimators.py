"""Classical point estimators for (sigma, gamma) from threshold excesses.

Three methods: method of moments (MOM), probability weighted moments (PWM)
and maximum likelihood (MLE).  All operate on zero-shifted excesses, i.e.
observations minus the threshold, so the location parameter is zero
throughout.

MOM inverts mean = sigma/(1 - gamma) and var = mean**2/(1 - 2*gamma);
PWM uses the weighted moments a_s = E[X * (1-F(X))**s] with the classical
(i - 0.35)/n plotting positions.  Both can produce estimates that are
inconsistent with the data (gamma < 0 with observations beyond the implied
upper bound sigma/|gamma|); this is flagged, not raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import maximize_sigma_gamma
from .errors import DegenerateMomentsError, InsufficientDataError, ParameterError
from .gpd import SMALL_GAMMA
from .validation import as_float_array


@dataclass(frozen=True)
class ExceedanceSample:
    """Threshold excesses plus the counts needed for tail-probability rescaling.

    ``excesses`` are the observations minus ``threshold`` (all strictly
    positive); ``n_total`` is the size of the original series the
    exceedances were extracted from.
    """

    threshold: float
    excesses: np.ndarray
    n_total: int
    n_exceed: int

    def __post_init__(self):
        excesses = as_float_array(self.excesses, "excesses")
        object.__setattr__(self, "excesses", excesses)
        if np.any(excesses <= 0.0):
            raise ParameterError("every excess must be strictly positive")
        if self.n_exceed != excesses.size:
            raise ParameterError("n_exceed must equal len(excesses)")
        if self.n_exceed > self.n_total:
            raise ParameterError("n_exceed cannot exceed n_total")

    @classmethod
    def from_excesses(cls, excesses, threshold: float = 0.0, n_total: int | None = None):
        """Build a sample directly from excess values (n_total defaults to their count)."""
        excesses = as_float_array(excesses, "excesses")
        if n_total is None:
            n_total = excesses.size
        return cls(threshold=float(threshold), excesses=excesses,
                   n_total=int(n_total), n_exceed=excesses.size)


@dataclass(frozen=True)
class FitResult:
    """Point estimate of (sigma, gamma) with bookkeeping.

    ``data_consistent`` is False when gamma_hat < 0 and some excess lies at
    or beyond the implied upper bound sigma_hat/|gamma_hat| (the classical
    inconsistency of moment-type estimators).  ``objective_value`` is the
    log likelihood or log posterior at the estimate, where applicable.
    """

    sigma_hat: float
    gamma_hat: float
    method: str
    converged: bool = True
    objective_value: float | None = None
    data_consistent: bool = True

    def __post_init__(self):
        if self.sigma_hat <= 0.0 or not np.isfinite(self.sigma_hat):
            raise ParameterError(f"sigma_hat must be positive, got {self.sigma_hat!r}")


def log_likelihood(excesses, sigma: float, gamma: float) -> float:
    """GPD log likelihood of zero-shifted excesses; ``-inf`` where invalid.

    l = -n*ln(sigma) - (1/gamma + 1) * sum(ln(1 + gamma*x_i/sigma))
    with the exponential limit for |gamma| < SMALL_GAMMA.
    """
    x = excesses.excesses if isinstance(excesses, ExceedanceSample) else np.asarray(excesses, dtype=float)
    if sigma <= 0.0 or not np.isfinite(sigma) or not np.isfinite(gamma):
        return -math.inf
    n = x.size
    if abs(gamma) < SMALL_GAMMA:
        return -n * math.log(sigma) - float(np.sum(x)) / sigma
    u = (gamma / sigma) * x
    if np.min(u) <= -1.0:
        return -math.inf
    return -n * math.log(sigma) - (1.0 / gamma + 1.0) * float(np.sum(np.log1p(u)))


def _check_consistent(excesses: np.ndarray, sigma: float, gamma: float) -> bool:
    if gamma >= 0.0:
        return True
    return bool(np.max(excesses) < sigma / abs(gamma))


def fit_mom(s: ExceedanceSample) -> FitResult:
    """Method-of-moments estimate from the sample mean and unbiased variance."""
    x = s.excesses
    if x.size < 2:
        raise InsufficientDataError("MOM needs at least 2 excesses")
    mean = float(np.mean(x))
    var = float(np.var(x, ddof=1))
    if var <= 0.0:
        raise InsufficientDataError("MOM needs non-degenerate excesses (zero sample variance)")
    ratio = mean * mean / var
    gamma = 0.5 * (1.0 - ratio)
    sigma = 0.5 * mean * (1.0 + ratio)
    return FitResult(
        sigma_hat=sigma,
        gamma_hat=gamma,
        method="mom",
        converged=True,
        objective_value=log_likelihood(x, sigma, gamma),
        data_consistent=_check_consistent(x, sigma, gamma),
    )


def fit_pwm(s: ExceedanceSample) -> FitResult:
    """Probability-weighted-moments estimate.

    a0 is the sample mean and a1 = (1/n) * sum_i (1 - p_i) * x_(i) over the
    ascending order statistics with p_i = (i - 0.35)/n; then
    k = a0/(a0 - 2*a1) - 2, sigma = 2*a0*a1/(a0 - 2*a1) and gamma = -k.
    """
    x = s.excesses
    n = x.size
    if n < 2:
        raise InsufficientDataError("PWM needs at least 2 excesses")
    xs = np.sort(x)
    p = (np.arange(1, n + 1) - 0.35) / n
    a0 = float(np.mean(xs))
    a1 = float(np.mean((1.0 - p) * xs))
    denom = a0 - 2.0 * a1
    if denom <= 0.0:
        raise DegenerateMomentsError("PWM weighted moments are degenerate (a0 - 2*a1 <= 0)")
    k = a0 / denom - 2.0
    sigma = 2.0 * a0 * a1 / denom
    gamma = -k
    return FitResult(
        sigma_hat=sigma,
        gamma_hat=gamma,
        method="pwm",
        converged=True,
        objective_value=log_likelihood(x, sigma, gamma),
        data_consistent=_check_consistent(x, sigma, gamma),
    )


def _starting_point(s: ExceedanceSample, log_objective, gamma_floor: float | None = None):
    """MOM start when it is valid for the objective, otherwise the
    exponential fit (sigma = mean, gamma = 0.1), which always is."""
    try:
        mom = fit_mom(s)
        sigma0 = mom.sigma_hat
        gamma0 = min(max(mom.gamma_hat, -0.9), 5.0)
        if gamma_floor is not None:
            gamma0 = max(gamma0, gamma_floor)
        if np.isfinite(log_objective(sigma0, gamma0)):
            return sigma0, gamma0
    except InsufficientDataError:
        pass
    return float(np.mean(s.excesses)), 0.1


def fit_mle(s: ExceedanceSample) -> FitResult:
    """Maximum likelihood via Nelder-Mead over (log sigma, gamma).

    Non-convergence (budget exhausted, or gamma pinned at the lower guard
    where the likelihood is unbounded) is reported through ``converged``,
    not raised.
    """
    x = s.excesses
    if x.size < 2:
        raise InsufficientDataError("MLE needs at least 2 excesses")
    objective = lambda sig, gam: log_likelihood(x, sig, gam)
    sigma0, gamma0 = _starting_point(s, objective)
    res = maximize_sigma_gamma(objective, sigma0, gamma0)
    return FitResult(
        sigma_hat=res.sigma,
        gamma_hat=res.gamma,
        method="mle",
        converged=res.converged,
        objective_value=res.value,
        data_consistent=_check_consistent(x, res.sigma, res.gamma),
    )
