"""Generalized Pareto distribution: density, CDF, quantiles and sampling.

Parametrization: location ``mu``, scale ``sigma > 0`` and shape ``gamma``
(the extreme value index).  The density is

    f(x) = (1/sigma) * (1 + gamma*(x - mu)/sigma) ** (-1/gamma - 1)

supported on [mu, inf) for gamma >= 0 and on [mu, mu - sigma/gamma) for
gamma < 0 (upper endpoint excluded).  All formulas switch to the
exponential limit when |gamma| < SMALL_GAMMA because the general form is
ill-conditioned near gamma = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .validation import check_probability

# Below this the (1 + gamma*z)**(-1/gamma) form loses all precision.
SMALL_GAMMA = 1e-8

# Smallest admissible uniform variate; keeps the inverse transform off U = 0,
# which would map to an infinite draw for gamma > 0.
_OPEN_LOW = np.nextafter(0.0, 1.0)


@dataclass(frozen=True)
class GpdParams:
    """Parameter triple (mu, sigma, gamma) of the GPD."""

    mu: float
    sigma: float
    gamma: float

    def __post_init__(self):
        for name in ("mu", "sigma", "gamma"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        if self.sigma <= 0.0:
            raise ParameterError(f"sigma must be positive, got {self.sigma!r}")

    @property
    def upper_endpoint(self) -> float:
        """Supremum of the support: finite only for gamma < 0."""
        if self.gamma < 0.0:
            return self.mu - self.sigma / self.gamma
        return math.inf


def _scaled(p: GpdParams, x):
    """(x - mu)/sigma as a 1-D array, plus whether the input was scalar."""
    scalar = np.ndim(x) == 0
    z = (np.atleast_1d(np.asarray(x, dtype=float)) - p.mu) / p.sigma
    return z, scalar


def _ret(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def log_pdf(p: GpdParams, x):
    """Log density; ``-inf`` off the support."""
    z, scalar = _scaled(p, x)
    out = np.full(z.shape, -math.inf)
    if abs(p.gamma) < SMALL_GAMMA:
        on = z >= 0.0
        out[on] = -math.log(p.sigma) - z[on]
    else:
        t = 1.0 + p.gamma * z
        on = (z >= 0.0) & (t > 0.0)
        out[on] = -math.log(p.sigma) - (1.0 / p.gamma + 1.0) * np.log1p(p.gamma * z[on])
    return _ret(out, scalar)


def pdf(p: GpdParams, x):
    """Density of the GPD; zero off the support."""
    lp = np.atleast_1d(np.asarray(log_pdf(p, x)))
    with np.errstate(over="ignore"):
        out = np.exp(lp)
    return _ret(out, np.ndim(x) == 0)


def cdf(p: GpdParams, x):
    """Distribution function, clamped to [0, 1]."""
    z, scalar = _scaled(p, x)
    out = np.zeros(z.shape)
    if abs(p.gamma) < SMALL_GAMMA:
        pos = z >= 0.0
        out[pos] = -np.expm1(-z[pos])
    else:
        t = 1.0 + p.gamma * z
        on = (z >= 0.0) & (t > 0.0)
        out[on] = -np.expm1(-np.log1p(p.gamma * z[on]) / p.gamma)
        if p.gamma < 0.0:
            out[z >= -1.0 / p.gamma] = 1.0
    np.clip(out, 0.0, 1.0, out=out)
    return _ret(out, scalar)


def survival(p: GpdParams, x):
    """P(X > x), computed directly for accuracy deep in the tail."""
    z, scalar = _scaled(p, x)
    out = np.ones(z.shape)
    if abs(p.gamma) < SMALL_GAMMA:
        pos = z >= 0.0
        out[pos] = np.exp(-z[pos])
    else:
        t = 1.0 + p.gamma * z
        on = (z >= 0.0) & (t > 0.0)
        out[on] = np.exp(-np.log1p(p.gamma * z[on]) / p.gamma)
        if p.gamma < 0.0:
            out[z >= -1.0 / p.gamma] = 0.0
    return _ret(out, scalar)


def _from_survival(p: GpdParams, u):
    """Inverse survival: the value whose exceedance probability is ``u``.

    This is the simulation transform X = (U**-gamma - 1)*sigma/gamma + mu
    with U read as a survival probability.
    """
    u = np.asarray(u, dtype=float)
    if abs(p.gamma) < SMALL_GAMMA:
        return p.mu - p.sigma * np.log(u)
    return p.mu + p.sigma * np.expm1(-p.gamma * np.log(u)) / p.gamma


def quantile(p: GpdParams, prob: float) -> float:
    """Value x with cdf(p, x) = prob, for prob strictly inside (0, 1)."""
    prob = check_probability(prob)
    return float(_from_survival(p, 1.0 - prob))


def sample(p: GpdParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` independent variates via the inverse survival transform.

    Uniforms are drawn on the open interval (0, 1); deterministic given the
    generator state.
    """
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    if n == 0:
        return np.empty(0)
    u = rng.uniform(_OPEN_LOW, 1.0, size=n)
    return np.asarray(_from_survival(p, u))
