"""Small input-validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .errors import InsufficientDataError, ParameterError


def as_float_array(values, name: str = "values", min_len: int = 1) -> np.ndarray:
    """Coerce to a 1-D float array and check it is finite and long enough."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ParameterError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_len:
        raise InsufficientDataError(f"{name} needs at least {min_len} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite values")
    return arr


def check_probability(p: float, name: str = "prob") -> float:
    """Require p to lie strictly inside (0, 1)."""
    p = float(p)
    if not np.isfinite(p) or not 0.0 < p < 1.0:
        raise ParameterError(f"{name} must lie in (0, 1), got {p!r}")
    return p


def check_positive(value: float, name: str) -> float:
    """Require a strictly positive finite scalar."""
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ParameterError(f"{name} must be positive and finite, got {value!r}")
    return value
