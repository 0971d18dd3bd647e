"""Threshold workflow: exceedance extraction, visual diagnostics data and
the multi-threshold sensitivity sweep.

Exceedances use the strict convention x > threshold, so excesses are
strictly positive after the shift.  Diagnostics are emitted as plot-ready
coordinate arrays; no automated threshold selection is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bayes import McmcConfig, PosteriorDraws, metropolis, posterior_mean
from .errors import InsufficientDataError, InsufficientExceedancesError
from .estimators import ExceedanceSample, FitResult, _check_consistent
from .risk import RiskCurve, RiskQuery, bayes_risk_curve
from .validation import as_float_array

DEFAULT_MIN_EXCEEDANCES = 10


def extract_exceedances(losses, threshold: float) -> ExceedanceSample:
    """Excesses over ``threshold`` (strict inequality), zero-shifted."""
    losses = as_float_array(losses, "losses")
    excesses = losses[losses > threshold] - threshold
    if excesses.size < 2:
        raise InsufficientExceedancesError(
            f"threshold {threshold} leaves {excesses.size} exceedance(s); need at least 2"
        )
    return ExceedanceSample(
        threshold=float(threshold),
        excesses=excesses,
        n_total=losses.size,
        n_exceed=excesses.size,
    )


def mean_excess_data(losses) -> tuple[np.ndarray, np.ndarray]:
    """Mean excess function e(u) = mean(x - u | x > u) at each candidate u.

    Candidates are the sorted unique losses except the maximum.  For GPD
    data e(u) is linear in u with slope gamma/(1 - gamma).
    """
    losses = as_float_array(losses, "losses", min_len=2)
    unique = np.unique(losses)
    if unique.size < 2:
        raise InsufficientDataError("mean excess plot needs at least 2 distinct losses")
    candidates = unique[:-1]
    sorted_losses = np.sort(losses)
    # Suffix sums over the sorted sample give every e(u) in one pass.
    suffix_sum = np.cumsum(sorted_losses[::-1])[::-1]
    idx = np.searchsorted(sorted_losses, candidates, side="right")
    counts = sorted_losses.size - idx
    e = suffix_sum[idx] / counts - candidates
    return candidates, e


def pareto_quantile_data(losses) -> tuple[np.ndarray, np.ndarray]:
    """Pareto quantile plot coordinates for the positive losses.

    Returns (ln((n+1)/i), ln x) pairs for i = 1..n with x the i-th largest
    positive loss; non-positive losses are omitted.  Linearity in the upper
    tail (small i, large theoretical quantile) suggests a Pareto-type tail
    and the slope there estimates gamma.
    """
    losses = np.asarray(losses, dtype=float)
    positive = losses[losses > 0.0]
    n = positive.size
    if n == 0:
        raise InsufficientDataError("no positive losses to plot")
    if n < 2:
        raise InsufficientDataError("Pareto quantile plot needs at least 2 positive losses")
    descending = np.sort(positive)[::-1]
    i = np.arange(1, n + 1)
    return np.log((n + 1) / i), np.log(descending)


@dataclass(frozen=True)
class SweepEntry:
    """One threshold's results; ``error`` is set (and the rest None) when the
    threshold could not be processed."""

    threshold: float
    n_exceed: int
    fit: FitResult | None = None
    draws: PosteriorDraws | None = None
    curve: RiskCurve | None = None
    error: str | None = None


@dataclass(frozen=True)
class ThresholdSweep:
    entries: tuple[SweepEntry, ...]
    master_seed: int

    def __len__(self) -> int:
        return len(self.entries)


def _derived_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence((master_seed, index)).generate_state(1, np.uint64)[0])


def fit_and_curve(
    losses,
    threshold: float,
    prior: str,
    cfg: McmcConfig,
    q: RiskQuery,
    point_method: str = "draw_mean",
) -> tuple[ExceedanceSample, PosteriorDraws, FitResult, RiskCurve]:
    """Single-threshold pipeline: extract, run the chain, build the curve.

    The returned FitResult carries the posterior mean; the curve includes
    the historical and Normal baselines computed from the full series.
    """
    sample = extract_exceedances(losses, threshold)
    draws = metropolis(sample, prior, cfg)
    sigma_mean, gamma_mean = posterior_mean(draws)
    fit = FitResult(
        sigma_hat=sigma_mean,
        gamma_hat=gamma_mean,
        method=f"mean/{prior}",
        converged=True,
        objective_value=None,
        data_consistent=_check_consistent(sample.excesses, sigma_mean, gamma_mean),
    )
    curve = bayes_risk_curve(draws, sample, q, losses=losses, point_method=point_method)
    return sample, draws, fit, curve


def sweep(
    losses,
    thresholds,
    prior: str,
    cfg: McmcConfig,
    q: RiskQuery,
    min_exceedances: int = DEFAULT_MIN_EXCEEDANCES,
) -> ThresholdSweep:
    """Repeat the single-threshold pipeline over several thresholds.

    Per-entry chain seeds are derived from ``cfg.seed`` and the threshold
    index, so the whole sweep is reproducible from one master seed.
    Individual failures are recorded without aborting the rest.
    """
    losses = as_float_array(losses, "losses")
    entries = []
    for index, threshold in enumerate(thresholds):
        threshold = float(threshold)
        n_exceed = int(np.sum(losses > threshold))
        if n_exceed < min_exceedances:
            entries.append(SweepEntry(
                threshold=threshold,
                n_exceed=n_exceed,
                error=f"only {n_exceed} exceedances; need at least {min_exceedances}",
            ))
            continue
        entry_cfg = replace(cfg, seed=_derived_seed(cfg.seed, index))
        try:
            _, draws, fit, curve = fit_and_curve(losses, threshold, prior, entry_cfg, q)
        except Exception as exc:  # record, keep sweeping
            entries.append(SweepEntry(threshold=threshold, n_exceed=n_exceed, error=str(exc)))
            continue
        entries.append(SweepEntry(
            threshold=threshold,
            n_exceed=n_exceed,
            fit=fit,
            draws=draws,
            curve=curve,
        ))
    return ThresholdSweep(entries=tuple(entries), master_seed=cfg.seed)
