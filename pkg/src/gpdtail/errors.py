"""Domain-specific exceptions.

All errors raised by this package derive from :class:`GpdTailError`, which
itself derives from ``ValueError`` so generic callers can catch broadly.
"""


class GpdTailError(ValueError):
    """Base class for every error raised by gpdtail."""


class ParameterError(GpdTailError):
    """Invalid distribution parameter or probability (e.g. sigma <= 0)."""


class InsufficientDataError(GpdTailError):
    """Too few (or degenerate) observations for the requested estimator."""


class DegenerateMomentsError(InsufficientDataError):
    """Sample (weighted) moments do not identify the parameters."""


class InsufficientExceedancesError(InsufficientDataError):
    """Fewer exceedances above the threshold than the operation requires."""


class EmptyChainError(GpdTailError):
    """A posterior sample with no stored draws was passed in."""


class InfiniteMeanError(GpdTailError):
    """Expected shortfall requested for a shape with no finite mean (gamma >= 1)."""


class HorizonTooShortError(GpdTailError):
    """Rescaled tail probability >= 1: the requested quantile is not in the
    modeled tail; the empirical (historical) estimate applies instead."""


class HistoricalLimitError(GpdTailError):
    """Requested quantile lies beyond what the empirical distribution can
    resolve (the historical curve stagnates at the data limit)."""
