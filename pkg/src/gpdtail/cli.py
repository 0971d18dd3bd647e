"""Command line surface.

Every subcommand is deterministic given its flags (including --seed), emits
machine-readable CSV/JSON with full float precision, and exits nonzero with
a single-line ``error: <tag>: <message>`` on stderr when something is wrong.
"""

from __future__ import annotations

import argparse
import contextlib
import datetime
import json
import os
import sys

import numpy as np

from . import datasets, gpd, series, study as study_mod, threshold as threshold_mod
from .bayes import McmcConfig, credible_interval, metropolis, posterior_mean, posterior_mode
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
from .estimators import _check_consistent, fit_mle, fit_mom, fit_pwm
from .risk import RiskCurve, RiskQuery

# Most specific class first; the first match supplies the error tag.
_ERROR_TAGS = (
    (DegenerateMomentsError, "degenerate-moments"),
    (InsufficientExceedancesError, "insufficient-exceedances"),
    (InsufficientDataError, "insufficient-data"),
    (ParameterError, "parameter-domain"),
    (EmptyChainError, "empty-chain"),
    (InfiniteMeanError, "infinite-mean"),
    (HorizonTooShortError, "horizon-too-short"),
    (HistoricalLimitError, "historical-limit"),
    (GpdTailError, "domain-error"),
)


def _fmt(x) -> str:
    """Full-precision decimal rendering (>= 15 significant digits)."""
    return format(float(x), ".17g")


def _fmt_label(x) -> str:
    """Short rendering for configuration echoes (thresholds, scenario grids)."""
    return format(float(x), "g")


def _default_seed() -> int:
    return int(os.environ.get("GPDTAIL_SEED", "0"))


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ParameterError(f"{flag} expects comma-separated numbers, got {text!r}") from exc


def _mcmc_config(args) -> McmcConfig:
    return McmcConfig(n_draws=args.draws, burn_in=args.burnin,
                      thinning=args.thin, seed=args.seed)


def _write_risk_curve(curve: RiskCurve, fh) -> None:
    fh.write("horizon_days,var_mean,var_lo,var_hi,es_mean,es_lo,es_hi,var_hist,var_normal\n")
    for pt in curve.points:
        hist = "" if pt.var_hist is None else _fmt(pt.var_hist)
        norm = "" if pt.var_normal is None else _fmt(pt.var_normal)
        fh.write(",".join([
            _fmt(pt.horizon_days), _fmt(pt.var_mean), _fmt(pt.var_lo), _fmt(pt.var_hi),
            _fmt(pt.es_mean), _fmt(pt.es_lo), _fmt(pt.es_hi), hist, norm,
        ]) + "\n")


def cmd_returns(args) -> int:
    prices = series.read_prices(args.prices)
    losses = series.log_losses(prices)
    with _open_out(args.out) as fh:
        fh.write("date,loss\n")
        for date, loss in zip(losses.dates, losses.losses):
            fh.write(f"{date.isoformat()},{_fmt(loss)}\n")
    return 0


def cmd_fit(args) -> int:
    losses = series.read_losses(args.losses)
    sample = threshold_mod.extract_exceedances(losses, args.threshold)
    bayesian = args.method in ("mode", "mean")
    doc = {
        "method": args.method,
        "prior": args.prior if bayesian else None,
        "threshold": args.threshold,
        "n_total": sample.n_total,
        "n_exceed": sample.n_exceed,
    }
    if args.method == "mom":
        fit = fit_mom(sample)
    elif args.method == "pwm":
        fit = fit_pwm(sample)
    elif args.method == "mle":
        fit = fit_mle(sample)
    elif args.method == "mode":
        fit = posterior_mode(sample, args.prior)
    else:
        draws = metropolis(sample, args.prior, _mcmc_config(args))
        sigma_mean, gamma_mean = posterior_mean(draws)
        doc.update({
            "sigma": sigma_mean,
            "gamma": gamma_mean,
            "converged": True,
            "data_consistent": _check_consistent(sample.excesses, sigma_mean, gamma_mean),
            "acceptance_rate": draws.acceptance_rate,
            "ci95_sigma": list(credible_interval(draws.sigmas, 0.95)),
            "ci95_gamma": list(credible_interval(draws.gammas, 0.95)),
        })
        fit = None
    if fit is not None:
        doc.update({
            "sigma": fit.sigma_hat,
            "gamma": fit.gamma_hat,
            "converged": fit.converged,
            "data_consistent": fit.data_consistent,
        })
    with _open_out(args.out) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_risk(args) -> int:
    losses = series.read_losses(args.losses)
    q = RiskQuery(horizons=tuple(_parse_float_list(args.horizons, "--horizons")),
                  level=args.level)
    _, _, _, curve = threshold_mod.fit_and_curve(
        losses, args.threshold, args.prior, _mcmc_config(args), q,
        point_method=args.point_method,
    )
    with _open_out(args.out) as fh:
        _write_risk_curve(curve, fh)
    return 0


def cmd_sweep(args) -> int:
    losses = series.read_losses(args.losses)
    thresholds = _parse_float_list(args.thresholds, "--thresholds")
    q = RiskQuery(horizons=tuple(_parse_float_list(args.horizons, "--horizons")),
                  level=args.level)
    result = threshold_mod.sweep(losses, thresholds, args.prior, _mcmc_config(args), q,
                                 min_exceedances=args.min_exceedances)
    os.makedirs(args.out_dir, exist_ok=True)
    summary = []
    for entry in result.entries:
        info = {"threshold": entry.threshold, "n_exceed": entry.n_exceed}
        if entry.error is not None:
            info["error"] = entry.error
        else:
            name = f"riskcurve_{_fmt_label(entry.threshold)}.csv"
            path = os.path.join(args.out_dir, name)
            with open(path, "w", newline="") as fh:
                _write_risk_curve(entry.curve, fh)
            info.update({
                "sigma": entry.fit.sigma_hat,
                "gamma": entry.fit.gamma_hat,
                "acceptance_rate": entry.draws.acceptance_rate,
                "curve_csv": name,
            })
        summary.append(info)
    doc = {"seed": args.seed, "prior": args.prior, "entries": summary}
    with open(os.path.join(args.out_dir, "sweep_summary.json"), "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_diag(args) -> int:
    losses = series.read_losses(args.losses)
    os.makedirs(args.out_dir, exist_ok=True)
    u, e = threshold_mod.mean_excess_data(losses)
    with open(os.path.join(args.out_dir, "mean_excess.csv"), "w", newline="") as fh:
        fh.write("threshold,mean_excess\n")
        for ui, ei in zip(u, e):
            fh.write(f"{_fmt(ui)},{_fmt(ei)}\n")
    lq, lx = threshold_mod.pareto_quantile_data(losses)
    with open(os.path.join(args.out_dir, "pareto_quantile.csv"), "w", newline="") as fh:
        fh.write("log_quantile,log_loss\n")
        for qi, xi in zip(lq, lx):
            fh.write(f"{_fmt(qi)},{_fmt(xi)}\n")
    return 0


def _study_scenarios(args) -> list[study_mod.StudyScenario]:
    estimators = tuple(args.estimators.split(",")) if args.estimators else study_mod.ALL_ESTIMATORS
    mcmc = McmcConfig(n_draws=args.draws, burn_in=args.burnin, thinning=args.thin, seed=0)
    if args.scenarios == "default":
        return study_mod.default_scenarios(replications=args.replications, mcmc=mcmc,
                                           estimators=estimators)
    with open(args.scenarios) as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise ParameterError("scenario file must contain a JSON list")
    scenarios = []
    for item in raw:
        scenarios.append(study_mod.StudyScenario(
            n=int(item["n"]),
            sigma=float(item["sigma"]),
            gamma=float(item["gamma"]),
            replications=int(item.get("replications", args.replications)),
            mcmc=mcmc,
            estimators=tuple(item.get("estimators", estimators)),
        ))
    return scenarios


def cmd_study(args) -> int:
    scenarios = _study_scenarios(args)
    report = study_mod.run_study(scenarios, master_seed=args.seed)
    failures = 0
    with _open_out(args.out) as fh:
        fh.write("scenario,n,sigma,gamma,parameter," + ",".join(study_mod.ALL_ESTIMATORS) + "\n")
        for si, sc in enumerate(report.scenarios):
            for parameter in ("sigma", "gamma"):
                cells = []
                for tag in study_mod.ALL_ESTIMATORS:
                    if tag not in sc.estimators:
                        cells.append("")
                        continue
                    cells.append(_fmt(report.rmse(si, tag, parameter)))
                    failures += report.cell(si, tag).n_failed
                truth = sc.sigma if parameter == "sigma" else sc.gamma
                fh.write(",".join([
                    str(si + 1), str(sc.n), _fmt_label(sc.sigma), _fmt_label(sc.gamma),
                    f"{parameter}={_fmt_label(truth)}",
                ] + cells) + "\n")
    # Both parameters share the same fit, so each failure was counted twice.
    failures //= 2
    if failures:
        print(f"note: {failures} estimator failure(s) dropped from RMSE cells", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    params = gpd.GpdParams(args.mu, args.sigma, args.gamma)
    rng = np.random.default_rng(args.seed)
    values = gpd.sample(params, args.n, rng)
    with _open_out(args.out) as fh:
        fh.write("value\n")
        for v in values:
            fh.write(_fmt(v) + "\n")
    return 0


def cmd_fixture(args) -> int:
    losses = datasets.synthetic_losses(
        n_total=args.n_total, n_tail=args.n_tail, threshold=args.threshold,
        tail_sigma=args.tail_sigma, tail_gamma=args.tail_gamma,
        body_mean=args.body_mean, body_sd=args.body_sd, seed=args.seed,
    )
    start = datetime.date(2002, 8, 1)
    with _open_out(args.out) as fh:
        fh.write("date,loss\n")
        for i, loss in enumerate(losses):
            date = start + datetime.timedelta(days=i)
            fh.write(f"{date.isoformat()},{_fmt(loss)}\n")
    return 0


def _add_mcmc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--draws", type=int, default=10_000, help="kept posterior draws")
    p.add_argument("--burnin", type=int, default=2_000, help="discarded initial proposals")
    p.add_argument("--thin", type=int, default=1, help="keep every k-th state")
    p.add_argument("--seed", type=int, default=_default_seed())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpdtail",
        description="Peaks-over-threshold GPD tail risk toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("returns", help="negated log returns from a price CSV")
    p.add_argument("prices")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_returns)

    p = sub.add_parser("fit", help="fit (sigma, gamma) to exceedances of a loss CSV")
    p.add_argument("losses")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--method", choices=("mom", "pwm", "mle", "mode", "mean"), default="mean")
    p.add_argument("--prior", choices=("mdi", "jeffreys", "uniform"), default="mdi")
    _add_mcmc_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("risk", help="VaR/ES curve with credible bands")
    p.add_argument("losses")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--prior", choices=("mdi", "jeffreys", "uniform"), default="mdi")
    p.add_argument("--horizons", default="10,50,100,200",
                   help="comma-separated trading-day horizons")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--point-method", choices=("draw_mean", "mixture"), default="draw_mean")
    _add_mcmc_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("sweep", help="risk curves across several thresholds")
    p.add_argument("losses")
    p.add_argument("--thresholds", required=True, help="comma-separated thresholds")
    p.add_argument("--prior", choices=("mdi", "jeffreys", "uniform"), default="mdi")
    p.add_argument("--horizons", default="10,50,100,200")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--min-exceedances", type=int, default=threshold_mod.DEFAULT_MIN_EXCEEDANCES)
    _add_mcmc_flags(p)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("diag", help="mean-excess and Pareto quantile plot data")
    p.add_argument("losses")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_diag)

    p = sub.add_parser("study", help="RMSE simulation study of the estimators")
    p.add_argument("--replications", type=int, default=study_mod.DESK_REPLICATIONS)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--scenarios", default="default",
                   help="'default' or a JSON file with scenario dicts")
    p.add_argument("--estimators", default=None,
                   help="comma-separated subset of " + ",".join(study_mod.ALL_ESTIMATORS))
    p.add_argument("--draws", type=int, default=study_mod.DESK_MCMC.n_draws)
    p.add_argument("--burnin", type=int, default=study_mod.DESK_MCMC.burn_in)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("simulate", help="raw GPD sample")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fixture", help="synthetic index-like loss series")
    p.add_argument("--n-total", type=int, default=2500)
    p.add_argument("--n-tail", type=int, default=125)
    p.add_argument("--threshold", type=float, default=0.033)
    p.add_argument("--tail-sigma", type=float, default=0.008)
    p.add_argument("--tail-gamma", type=float, default=0.3)
    p.add_argument("--body-mean", type=float, default=0.0005)
    p.add_argument("--body-sd", type=float, default=0.012)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fixture)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GpdTailError as exc:
        tag = next(t for cls, t in _ERROR_TAGS if isinstance(exc, cls))
        message = " ".join(str(exc).split())
        print(f"error: {tag}: {message}", file=sys.stderr)
        return 2
    except OSError as exc:
        message = " ".join(str(exc).split())
        print(f"error: io-error: {message}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        message = " ".join(str(exc).split())
        print(f"error: invalid-input: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
