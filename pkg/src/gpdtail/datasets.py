"""Synthetic market-like fixtures.

The real index data behind the original analysis is proprietary, so the
package ships a generator producing a comparable daily loss series: a
Normal body truncated below the threshold plus a GPD tail above it.  The
tail count is exact, which keeps the generating tail probability
(n_tail/n_total) and hence the "true" risk measures well defined for
coverage experiments.
"""

from __future__ import annotations

import datetime

import numpy as np

from .errors import ParameterError
from .gpd import GpdParams, sample as gpd_sample


def synthetic_losses(
    n_total: int = 2500,
    n_tail: int = 125,
    threshold: float = 0.033,
    tail_sigma: float = 0.008,
    tail_gamma: float = 0.3,
    body_mean: float = 0.0005,
    body_sd: float = 0.012,
    seed: int = 0,
) -> np.ndarray:
    """Daily losses: ``n_total - n_tail`` Normal draws truncated below the
    threshold, plus ``n_tail`` GPD exceedances above it, shuffled."""
    if n_tail < 0 or n_tail > n_total:
        raise ParameterError("need 0 <= n_tail <= n_total")
    if body_sd <= 0.0:
        raise ParameterError("body_sd must be positive")
    rng = np.random.default_rng(seed)
    n_body = n_total - n_tail
    body = rng.normal(body_mean, body_sd, size=n_body)
    # Rejection step: the body must stay strictly below the threshold.
    while True:
        over = body >= threshold
        k = int(np.sum(over))
        if k == 0:
            break
        body[over] = rng.normal(body_mean, body_sd, size=k)
    tail = gpd_sample(GpdParams(threshold, tail_sigma, tail_gamma), n_tail, rng)
    losses = np.concatenate([body, tail])
    return losses[rng.permutation(n_total)]


def synthetic_prices(
    start_price: float = 100.0,
    start_date: datetime.date = datetime.date(2002, 8, 1),
    **loss_kwargs,
) -> tuple[list[datetime.date], np.ndarray]:
    """Price path consistent with :func:`synthetic_losses`.

    Losses are negated log returns, so price_t = price_{t-1} * exp(-loss_t).
    Returns one more price than there are losses.
    """
    if start_price <= 0.0:
        raise ParameterError("start_price must be positive")
    losses = synthetic_losses(**loss_kwargs)
    closes = start_price * np.exp(np.concatenate([[0.0], -np.cumsum(losses)]))
    dates = [start_date + datetime.timedelta(days=i) for i in range(closes.size)]
    return dates, closes
