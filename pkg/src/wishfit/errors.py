"""Exception and warning types shared across the package."""

from __future__ import annotations


class WishfitError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WishfitError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class NotSymmetricError(WishfitError, ValueError):
    """A matrix expected to be symmetric is not, beyond tolerance."""


class NotPositiveDefiniteError(WishfitError, ValueError):
    """A matrix expected to be symmetric positive definite is not."""


class DegenerateSampleError(WishfitError, ValueError):
    """A matrix sample cannot be standardized (e.g. singular sample mean)."""


class SeriesNonConvergenceError(WishfitError, ArithmeticError):
    """A matrix-argument series hit its weight cap before meeting tolerance.

    Attributes
    ----------
    partial_value : float
        The partial sum accumulated before the cap was reached.
    weight_reached : int
        The last weight layer that was added.
    """

    def __init__(self, message: str, partial_value: float, weight_reached: int):
        super().__init__(message)
        self.partial_value = partial_value
        self.weight_reached = weight_reached


class CrossMethodError(WishfitError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class DataFormatError(WishfitError, ValueError):
    """An input file does not conform to the documented format."""


class SeriesAccuracyWarning(UserWarning):
    """Emitted when a series argument is large enough that the result's
    floating-point accuracy may be degraded (Frobenius norm > 50)."""


class StatisticValueWarning(UserWarning):
    """Emitted when a computed statistic needed a tiny negative-roundoff clamp."""


class DataQualityWarning(UserWarning):
    """Emitted on lossy but recoverable data handling (forward-filled dates,
    dropped trailing return rows, estimator conventions worth surfacing)."""
