class EstimationError(Exception):
    """Base class for every error raised by subspacepdf."""


class InvalidParameterError(EstimationError, ValueError):
    """A parameter vector is not admissible for its model (sigma <= 0, wrong length)."""


class DegenerateRangeError(EstimationError, ValueError):
    """A grid range collapsed (hi <= lo after applying the range rule)."""


class DegenerateMeasurementError(EstimationError, ValueError):
    """A measurement or sample record carries no usable information."""


class RankDeficiencyError(EstimationError):
    """The Jacobian has no full column rank at the requested parameters."""


class ConfigurationError(EstimationError, ValueError):
    """Invalid solver, grid or campaign settings."""


class DataError(EstimationError):
    """A sample file could not be read or parsed."""
