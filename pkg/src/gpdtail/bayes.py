"""Objective-Bayes estimation of (sigma, gamma) for threshold excesses.

Priors
------
``mdi``       log prior = gamma - ln(sigma)
``jeffreys``  log prior = -ln(sigma) - ln(1+gamma) - 0.5*ln(1+2*gamma),
              defined only for gamma > -0.5
``uniform``   log prior = 0 (posterior mode coincides with the MLE)

The log posterior is the GPD log likelihood plus the log prior, up to an
additive constant which is fixed to zero: only differences enter the
Metropolis accept rule, so the constant cancels.

The sampler is plain random-walk Metropolis with a bivariate Normal
proposal on (sigma, gamma): accept the proposal when
ln p(proposal) - ln p(current) > ln U with U uniform on (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import maximize_sigma_gamma
from .errors import EmptyChainError, GpdTailError, InsufficientDataError, ParameterError
from .estimators import ExceedanceSample, FitResult, _check_consistent, _starting_point, log_likelihood
from .gpd import SMALL_GAMMA, _OPEN_LOW
from .validation import as_float_array, check_probability

PRIORS = ("mdi", "jeffreys", "uniform")

# Post-burn-in acceptance rates outside this range flag a mistuned chain.
ACCEPTANCE_BOUNDS = (0.05, 0.80)

# Burn-in adaptation: every _ADAPT_EVERY proposals nudge the scales by
# _ADAPT_FACTOR to steer acceptance into _ADAPT_TARGET; frozen afterward.
_ADAPT_EVERY = 100
_ADAPT_TARGET = (0.2, 0.5)
_ADAPT_FACTOR = 1.1

# Default proposal scale: 0.15 * |mode estimate| per coordinate.  The floor
# applies to gamma only (its mode can sit at 0); sigma's scale must stay
# proportional to sigma itself or small-scale data gets unusable proposals.
_SCALE_MULT = 0.15
_GAMMA_SCALE_FLOOR = 0.01


def _check_prior(prior: str) -> str:
    if prior not in PRIORS:
        raise ParameterError(f"unknown prior {prior!r}; expected one of {PRIORS}")
    return prior


def log_prior(prior: str, sigma: float, gamma: float) -> float:
    """Log prior density up to a constant; ``-inf`` outside the prior's domain."""
    _check_prior(prior)
    if sigma <= 0.0:
        return -math.inf
    if prior == "mdi":
        return gamma - math.log(sigma)
    if prior == "jeffreys":
        if gamma <= -0.5:
            return -math.inf
        return -math.log(sigma) - math.log1p(gamma) - 0.5 * math.log1p(2.0 * gamma)
    return 0.0


def log_posterior(s: ExceedanceSample, prior: str, sigma: float, gamma: float) -> float:
    """Log posterior up to a constant; ``-inf`` encodes every invalid point."""
    _check_prior(prior)
    if sigma <= 0.0 or not np.isfinite(sigma) or not np.isfinite(gamma):
        return -math.inf
    lp = log_prior(prior, sigma, gamma)
    if lp == -math.inf:
        return -math.inf
    return log_likelihood(s, sigma, gamma) + lp


@dataclass(frozen=True)
class McmcConfig:
    """Random-walk Metropolis settings.

    ``proposal_scale_sigma``/``proposal_scale_gamma`` default (None) to
    0.15 * |posterior mode| per coordinate, with an absolute floor of 0.01
    on the gamma scale.  When ``adapt`` is set the scales are tuned during
    burn-in only.
    """

    n_draws: int = 10_000
    burn_in: int = 2_000
    thinning: int = 1
    proposal_scale_sigma: float | None = None
    proposal_scale_gamma: float | None = None
    proposal_correlation: float = 0.0
    seed: int = 0
    adapt: bool = True

    def __post_init__(self):
        if self.n_draws < 1:
            raise ParameterError("n_draws must be >= 1")
        if self.burn_in < 0:
            raise ParameterError("burn_in must be >= 0")
        if self.thinning < 1:
            raise ParameterError("thinning must be >= 1")
        if not -1.0 < self.proposal_correlation < 1.0:
            raise ParameterError("proposal_correlation must lie in (-1, 1)")
        for name in ("proposal_scale_sigma", "proposal_scale_gamma"):
            v = getattr(self, name)
            if v is not None and v <= 0.0:
                raise ParameterError(f"{name} must be positive")


@dataclass(frozen=True)
class PosteriorDraws:
    """Ordered (sigma, gamma) draws from the Metropolis chain.

    ``acceptance_rate`` is recorded over post-burn-in proposals only;
    ``acceptance_warning`` flags rates outside ACCEPTANCE_BOUNDS.
    """

    draws: np.ndarray
    acceptance_rate: float
    burn_in: int
    thinning: int
    seed: int
    acceptance_warning: bool = False

    def __len__(self) -> int:
        return self.draws.shape[0]

    @property
    def sigmas(self) -> np.ndarray:
        return self.draws[:, 0]

    @property
    def gammas(self) -> np.ndarray:
        return self.draws[:, 1]


def posterior_mode(s: ExceedanceSample, prior: str) -> FitResult:
    """Maximize the log posterior with the same optimizer contract as the MLE."""
    _check_prior(prior)
    x = s.excesses
    if x.size < 2:
        raise InsufficientDataError("posterior mode needs at least 2 excesses")
    objective = lambda sig, gam: log_posterior(s, prior, sig, gam)
    gamma_floor = -0.4 if prior == "jeffreys" else None
    sigma0, gamma0 = _starting_point(s, objective, gamma_floor=gamma_floor)
    res = maximize_sigma_gamma(objective, sigma0, gamma0)
    return FitResult(
        sigma_hat=res.sigma,
        gamma_hat=res.gamma,
        method=f"mode/{prior}",
        converged=res.converged,
        objective_value=res.value,
        data_consistent=_check_consistent(x, res.sigma, res.gamma),
    )


def metropolis(s: ExceedanceSample, prior: str, cfg: McmcConfig) -> PosteriorDraws:
    """Run the random-walk Metropolis chain, started at the posterior mode.

    Deterministic given ``cfg.seed``: all proposal increments and uniforms
    are drawn up front.  Proposals with log posterior ``-inf`` are always
    rejected; a proposal equal to the current state is always accepted
    (ln U < 0 surely).
    """
    _check_prior(prior)
    mode = posterior_mode(s, prior)
    sigma_cur, gamma_cur = mode.sigma_hat, mode.gamma_hat

    scale_sigma = cfg.proposal_scale_sigma
    if scale_sigma is None:
        scale_sigma = _SCALE_MULT * abs(sigma_cur)
    scale_gamma = cfg.proposal_scale_gamma
    if scale_gamma is None:
        scale_gamma = max(_SCALE_MULT * abs(gamma_cur), _GAMMA_SCALE_FLOOR)

    x = s.excesses
    x_sum = float(np.sum(x))
    n = x.size
    prior_is_mdi = prior == "mdi"
    prior_is_jeff = prior == "jeffreys"

    def lp(sig: float, gam: float) -> float:
        # Inlined log_posterior: this is the chain's hot path.
        if sig <= 0.0:
            return -math.inf
        if abs(gam) < SMALL_GAMMA:
            ll = -n * math.log(sig) - x_sum / sig
        else:
            u = (gam / sig) * x
            if u.min() <= -1.0:
                return -math.inf
            ll = -n * math.log(sig) - (1.0 / gam + 1.0) * float(np.log1p(u).sum())
        if prior_is_mdi:
            return ll + gam - math.log(sig)
        if prior_is_jeff:
            if gam <= -0.5:
                return -math.inf
            return ll - math.log(sig) - math.log1p(gam) - 0.5 * math.log1p(2.0 * gam)
        return ll

    lp_cur = lp(sigma_cur, gamma_cur)
    if not np.isfinite(lp_cur):
        raise GpdTailError("posterior mode has non-finite log posterior; cannot start chain")

    total = cfg.burn_in + cfg.n_draws * cfg.thinning
    rng = np.random.default_rng(cfg.seed)
    z = rng.standard_normal((total, 2))
    rho = cfg.proposal_correlation
    e_sigma = z[:, 0]
    e_gamma = rho * z[:, 0] + math.sqrt(1.0 - rho * rho) * z[:, 1]
    log_u = np.log(rng.uniform(_OPEN_LOW, 1.0, size=total))

    draws = np.empty((cfg.n_draws, 2))
    kept = 0
    accepted_post = 0
    accepted_window = 0
    for i in range(total):
        prop_sigma = sigma_cur + scale_sigma * e_sigma[i]
        prop_gamma = gamma_cur + scale_gamma * e_gamma[i]
        lp_prop = lp(prop_sigma, prop_gamma)
        accept = lp_prop - lp_cur > log_u[i]
        if accept:
            sigma_cur, gamma_cur, lp_cur = prop_sigma, prop_gamma, lp_prop
        if i < cfg.burn_in:
            if cfg.adapt:
                accepted_window += accept
                if (i + 1) % _ADAPT_EVERY == 0:
                    rate = accepted_window / _ADAPT_EVERY
                    if rate > _ADAPT_TARGET[1]:
                        scale_sigma *= _ADAPT_FACTOR
                        scale_gamma *= _ADAPT_FACTOR
                    elif rate < _ADAPT_TARGET[0]:
                        scale_sigma /= _ADAPT_FACTOR
                        scale_gamma /= _ADAPT_FACTOR
                    accepted_window = 0
        else:
            accepted_post += accept
            if (i - cfg.burn_in + 1) % cfg.thinning == 0:
                draws[kept, 0] = sigma_cur
                draws[kept, 1] = gamma_cur
                kept += 1

    rate = accepted_post / (cfg.n_draws * cfg.thinning)
    warning = not ACCEPTANCE_BOUNDS[0] <= rate <= ACCEPTANCE_BOUNDS[1]
    return PosteriorDraws(
        draws=draws,
        acceptance_rate=rate,
        burn_in=cfg.burn_in,
        thinning=cfg.thinning,
        seed=cfg.seed,
        acceptance_warning=warning,
    )


def posterior_mean(d: PosteriorDraws) -> tuple[float, float]:
    """Coordinate-wise arithmetic mean of the stored draws."""
    if len(d) == 0:
        raise EmptyChainError("no draws to average")
    return float(np.mean(d.sigmas)), float(np.mean(d.gammas))


def credible_interval(values, level: float) -> tuple[float, float]:
    """Equal-tailed interval from empirical quantiles.

    Quantile convention: linear interpolation between order statistics at
    position q*(n-1)+1 (numpy's default).
    """
    values = as_float_array(values, "values")
    check_probability(level, "level")
    tail = 0.5 * (1.0 - level)
    lo, hi = np.quantile(values, [tail, 1.0 - tail])
    return float(lo), float(hi)
