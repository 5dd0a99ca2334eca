from ..errors import (
    ConfigurationError,
    DataError,
    DegenerateMeasurementError,
    DegenerateRangeError,
    InvalidParameterError,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ESTIMATOR = 3


def exit_code_for(error):
    """Exit status for an error raised while preparing a command."""
    if isinstance(error, (DataError, DegenerateMeasurementError, DegenerateRangeError)):
        return EXIT_DATA
    if isinstance(error, (ConfigurationError, InvalidParameterError)):
        return EXIT_USAGE
    return EXIT_DATA


def parse_float_list(text):
    """'2.5' or '1.0,2.0' -> [2.5] / [1.0, 2.0]."""
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigurationError(f"Expected comma-separated numbers, got {text!r}") from None


def parse_int_list(text):
    try:
        values = [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigurationError(f"Expected comma-separated integers, got {text!r}") from None
    if not values:
        raise ConfigurationError("Empty integer list")
    return values


def true_params(args, model):
    """Parameter vector from --sigma0 (and --mu0 for two-parameter models)."""
    if model.n_params == 1:
        return (args.sigma0,)
    return (args.sigma0, args.mu0)
