"""Shared 2-D maximizer for likelihood/posterior surfaces.

Runs Nelder-Mead over (log sigma, gamma): the log scale removes the
sigma > 0 boundary, and gamma is kept inside [GAMMA_MIN, GAMMA_MAX] by an
infinite penalty (the likelihood is unbounded as gamma -> -1, and no
realistic tail has gamma > 10).
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize

GAMMA_MIN = -0.99
GAMMA_MAX = 10.0

# Simplex diameter / function tolerance and evaluation budget.
_XATOL = 1e-8
_FATOL = 1e-8
_MAXFEV = 2000

# gamma estimates this close to the guard are treated as pinned (the
# objective is still climbing at the boundary).
_PIN_TOL = 1e-3

# Finite stand-in for -log(0): keeps the simplex bookkeeping free of
# inf - inf while still dwarfing any reachable objective value.
_PENALTY = 1e15


class MaximizeResult(NamedTuple):
    sigma: float
    gamma: float
    value: float
    converged: bool


def maximize_sigma_gamma(
    log_objective: Callable[[float, float], float],
    sigma0: float,
    gamma0: float,
) -> MaximizeResult:
    """Maximize ``log_objective(sigma, gamma)`` from the given start point.

    ``log_objective`` may return ``-inf`` for invalid regions; the start
    point must be valid (finite objective) or the result is meaningless.
    """
    gamma0 = min(max(gamma0, GAMMA_MIN + 0.05), GAMMA_MAX - 0.05)

    def neg(v):
        log_sigma, gamma = v
        if not (GAMMA_MIN <= gamma <= GAMMA_MAX) or abs(log_sigma) > 700.0:
            return _PENALTY
        value = log_objective(math.exp(log_sigma), gamma)
        return -value if np.isfinite(value) else _PENALTY

    res = minimize(
        neg,
        x0=np.array([math.log(sigma0), gamma0]),
        method="Nelder-Mead",
        options={"xatol": _XATOL, "fatol": _FATOL, "maxfev": _MAXFEV},
    )
    sigma = math.exp(res.x[0])
    gamma = float(res.x[1])
    pinned = gamma <= GAMMA_MIN + _PIN_TOL
    stuck = res.fun >= _PENALTY
    return MaximizeResult(
        sigma, gamma, -float(res.fun),
        bool(res.success) and not pinned and not stuck,
    )
