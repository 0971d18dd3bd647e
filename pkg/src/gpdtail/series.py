"""Price/loss series types and CSV ingestion.

Input price files carry a ``date,close`` header with ISO-8601 dates, one
row per trading day.  Loss files carry ``date,loss`` (the format emitted by
the ``returns`` command); a bare ``loss`` or ``value`` column is also
accepted so simulated samples can be fed back in.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .validation import as_float_array


@dataclass(frozen=True)
class PriceSeries:
    """Ordered daily closing prices."""

    dates: tuple[datetime.date, ...]
    closes: np.ndarray

    def __post_init__(self):
        closes = as_float_array(self.closes, "closes")
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != closes.size:
            raise ParameterError("dates and closes must have equal length")
        if np.any(closes <= 0.0):
            raise ParameterError("closes must be positive")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ParameterError("dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class LossSeries:
    """Daily losses (negated log returns), dated at the later day."""

    dates: tuple[datetime.date, ...]
    losses: np.ndarray

    def __post_init__(self):
        losses = as_float_array(self.losses, "losses")
        object.__setattr__(self, "losses", losses)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != losses.size:
            raise ParameterError("dates and losses must have equal length")

    def __len__(self) -> int:
        return len(self.dates)


def log_losses(p: PriceSeries) -> LossSeries:
    """loss_t = -ln(close_t / close_{t-1}), dated at t."""
    if len(p) < 2:
        raise ParameterError("need at least 2 prices to form losses")
    losses = -np.diff(np.log(p.closes))
    return LossSeries(dates=p.dates[1:], losses=losses)


def _parse_date(text: str, row: int) -> datetime.date:
    try:
        return datetime.date.fromisoformat(text.strip())
    except ValueError as exc:
        raise ParameterError(f"row {row}: bad date {text!r} (expected ISO-8601)") from exc


def _parse_float(text: str, row: int, column: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ParameterError(f"row {row}: bad {column} value {text!r}") from exc


def read_prices(path) -> PriceSeries:
    """Read a ``date,close`` CSV."""
    dates, closes = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "date" not in reader.fieldnames or "close" not in reader.fieldnames:
            raise ParameterError(f"{path}: expected a header with 'date' and 'close' columns")
        for i, record in enumerate(reader, start=2):
            dates.append(_parse_date(record["date"], i))
            closes.append(_parse_float(record["close"], i, "close"))
    if not dates:
        raise ParameterError(f"{path}: no data rows")
    return PriceSeries(dates=tuple(dates), closes=np.asarray(closes))


def read_losses(path) -> np.ndarray:
    """Read a loss CSV (``date,loss``, or a single ``loss``/``value`` column)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        column = next((c for c in ("loss", "value") if c in names), None)
        if column is None:
            raise ParameterError(f"{path}: expected a header with a 'loss' or 'value' column")
        values = [_parse_float(record[column], i, column)
                  for i, record in enumerate(reader, start=2)]
    if not values:
        raise ParameterError(f"{path}: no data rows")
    return np.asarray(values)
