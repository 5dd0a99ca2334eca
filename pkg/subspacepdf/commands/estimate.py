import sys

from . import EXIT_DATA, EXIT_ESTIMATOR, EXIT_OK, exit_code_for, parse_float_list, true_params
from ..baselines import bayes_rayleigh, histogram_init, l2_fit, mle_rayleigh, moment_init, moment_rayleigh
from ..config import bench_setting, l2_config, solver_config
from ..distributions import ParamVector, check_params, sample
from ..errors import ConfigurationError, DataError, EstimationError
from ..formatting import format_estimate
from ..measurement import build_grid, default_grid, default_policy, histogram_density, noise_free
from ..models import get_model
from ..records import parse_inline, read_samples, trace_rows, write_csv
from ..subspace import Termination, estimate

_CLOSED_FORMS = {
    'mle': mle_rayleigh,
    'bayes': bayes_rayleigh,
    'moment': moment_rayleigh,
}


def _load_measurement(args, config, model, histogram=True):
    """(record or None, measurement or None) for the requested input source."""
    n_bins = args.n_bins or bench_setting(config, "n_bins")
    truth = check_params(model, true_params(args, model))
    if args.exact:
        grid = default_grid(model, truth, n_bins)
        return None, noise_free(model, grid, truth)

    if args.input:
        record = read_samples(args.input)
    elif args.record:
        record = parse_inline(args.record)
    else:
        seed = args.seed if args.seed is not None else bench_setting(config, "master_seed")
        record = sample(model, truth, args.k, seed)
    if not histogram:
        return record, None
    grid = build_grid(record, default_policy(model, n_bins), model)
    return record, histogram_density(record, grid)


def _start_point(args, model, record, measurement):
    if args.xi0:
        xi0 = ParamVector(parse_float_list(args.xi0))
        check_params(model, xi0)
        return xi0
    if record is not None:
        return moment_init(model, record)
    return histogram_init(model, measurement)


def do_estimate(args, config):
    """Estimate parameters from one record (file, inline, synthetic or --exact)."""
    try:
        model = get_model(args.model)
        if args.estimator != 'subspace' and args.exact:
            raise ConfigurationError("--exact works with the subspace estimator only")
        if args.estimator in _CLOSED_FORMS and model.name != 'rayleigh':
            raise ConfigurationError(f"Estimator '{args.estimator}' is defined for the Rayleigh model only")
        if args.estimator == 'l2' and model.n_params != 1:
            raise ConfigurationError("The L2 fit needs a one-parameter model")
        solver = solver_config(config, max_iters=args.max_iters)
        record, measurement = _load_measurement(
            args, config, model, histogram=args.estimator not in _CLOSED_FORMS)
        xi0 = _start_point(args, model, record, measurement) if args.estimator == 'subspace' else None
    except EstimationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)

    if measurement is None:
        print("Model: %s  (K=%d)" % (model.name, record.size))
    else:
        source = 'noise-free model vector' if record is None else 'K=%d' % measurement.record_size
        print("Model: %s  (%s, N=%d)" % (model.name, source, measurement.grid.size))
    if measurement is not None and measurement.dropped:
        print("Dropped samples outside the grid: %d" % measurement.dropped)

    try:
        if args.estimator == 'subspace':
            result = estimate(measurement, model, xi0, solver)
            print("Start: %s" % ', '.join('%s = %.6f' % p for p in zip(model.param_names, xi0)))
            print(format_estimate(model.param_names, result.xi_final, result.iterations,
                                  result.termination.value))
            if args.out:
                write_csv(args.out, ['iteration', *model.param_names, 'lyapunov'], trace_rows(result))
                print("Trace written to %s" % args.out)
            if result.termination is Termination.MAX_ITERS:
                print("Error: estimate did not converge within %d iterations" % solver.max_iters,
                      file=sys.stderr)
                return EXIT_ESTIMATOR
        elif args.estimator == 'l2':
            fit_config = l2_config(config, moment_init(model, record).sigma)
            print(format_estimate(model.param_names, [l2_fit(measurement, fit_config, model)]))
        else:
            value = _CLOSED_FORMS[args.estimator](record)
            print(format_estimate(model.param_names, [value]))
    except DataError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ConfigurationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)
    except EstimationError as e:
        print(f"Estimator failure: {e}", file=sys.stderr)
        return EXIT_ESTIMATOR
    return EXIT_OK
