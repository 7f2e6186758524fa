"""Exception and warning types shared across the package."""


class SmcestError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(SmcestError):
    """A descriptor, option, or constructor argument is invalid."""


class ModelValidityError(SmcestError):
    """Model parameters fall outside the model's valid region."""

    def __init__(self, message, invalid_rows=None):
        super().__init__(message)
        self.invalid_rows = invalid_rows


class UnsupportedDensityError(SmcestError):
    """The distribution does not define the requested density operation."""


class DegeneracyError(SmcestError):
    """A computation collapsed to a degenerate state (all-zero posterior
    weights, affinely dependent point sets, singular covariance)."""


class ConvergenceError(SmcestError):
    """An iterative routine exhausted its iteration budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DataError(SmcestError):
    """Input data rows are malformed; carries the offending row number."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class HeuristicExhaustedError(SmcestError):
    """A finite experiment-design heuristic has no experiments left."""


class UnidentifiableParameterError(SmcestError):
    """Accumulated Fisher information is singular along some direction."""

    def __init__(self, message, null_direction=None):
        super().__init__(message)
        self.null_direction = null_direction


class ImpoverishmentWarning(UserWarning):
    """The particle filter's effective sample size has degraded badly."""


class NumericsWarning(UserWarning):
    """A computed value drifted outside its mathematical range and was
    clamped, or an input was silently coerced."""


class ResamplingWarning(UserWarning):
    """The resampler hit a degenerate input or gave up redrawing."""
