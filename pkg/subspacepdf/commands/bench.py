import sys

from . import EXIT_DATA, EXIT_OK, exit_code_for, parse_float_list, parse_int_list, true_params
from ..bench import CampaignConfig, FixedStart, MomentStart, run_campaign, sweep_bins, sweep_record_size
from ..config import bench_setting, get_workers, l2_settings, solver_config
from ..data import load_reference_tables, reference_cell
from ..distributions import ParamVector
from ..errors import ConfigurationError, DataError, EstimationError
from ..formatting import format_campaign_table, format_sweep_table
from ..models import get_model
from ..records import CAMPAIGN_HEADER, campaign_rows, write_csv

SWEEP_HEADER = ['mean', 'variance', 'failures']


def _progress(label):
    def report(value, completed, total):
        if completed < total:
            sys.stderr.write("\r   [%s=%d: %d/%d]" % (label, value, completed, total))
        else:
            sys.stderr.write("\r" + " " * 60 + "\r")
        sys.stderr.flush()
    return report


def _campaign_config(args, config, record_sizes, estimators, n_bins=None):
    model = get_model(args.model)
    lo_factor, hi_factor, l2_kwargs = l2_settings(config)
    if args.xi0:
        policy = FixedStart(ParamVector(parse_float_list(args.xi0)))
    else:
        policy = MomentStart()
    return CampaignConfig(
        model=model.name,
        true_params=true_params(args, model),
        record_sizes=tuple(record_sizes),
        n_bins=n_bins or getattr(args, "n_bins", None) or bench_setting(config, "n_bins"),
        trials=args.trials if args.trials is not None else bench_setting(config, "trials"),
        estimators=tuple(estimators),
        master_seed=args.seed if args.seed is not None else bench_setting(config, "master_seed"),
        xi0_policy=policy,
        solver=solver_config(config, max_iters=args.max_iters),
        l2_bounds=(lo_factor, hi_factor),
        l2_coarse_points=l2_kwargs.get("coarse_points", 200),
        l2_refine_iters=l2_kwargs.get("refine_iters", 60),
        workers=get_workers(config),
    )


def _emit(args, header, rows):
    if args.out:
        write_csv(args.out, header, rows)
        print("CSV written to %s" % args.out)


def _reference_lookup(cfg):
    """(label, K) -> (variance, mean) when the run matches the published setting."""
    tables = load_reference_tables()
    if (cfg.model.value != tables.get("model") or cfg.n_bins != tables.get("n_bins")
            or abs(cfg.true_params.sigma - tables.get("sigma0", 0.0)) > 1e-12):
        print("Note: published reference values exist only for rayleigh, sigma0=%g, N=%d"
              % (tables.get("sigma0"), tables.get("n_bins")), file=sys.stderr)
        return None
    lookup = {}
    for name in cfg.estimators:
        for k in cfg.record_sizes:
            cell = reference_cell(tables, name, k)
            if cell is not None:
                lookup[(name, k)] = cell
    return lookup


def do_bench(args, config):
    """Run a trial campaign and print the estimator comparison table."""
    try:
        estimators = [e.strip() for e in args.estimators.split(',') if e.strip()]
        cfg = _campaign_config(args, config, parse_int_list(args.k), estimators)
    except EstimationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)

    print("Campaign: %s %s, N=%d, %d trials per record size, seed %d" % (
        cfg.model.value, tuple(cfg.true_params), cfg.n_bins, cfg.trials, cfg.master_seed))
    stats = run_campaign(cfg, _progress('Bench K'))
    reference = _reference_lookup(cfg) if args.compare else None
    print(format_campaign_table(stats, reference))
    try:
        _emit(args, CAMPAIGN_HEADER, campaign_rows(stats))
    except DataError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def do_sweep_k(args, config):
    """Subspace accuracy versus record size at fixed bin count."""
    try:
        cfg = _campaign_config(args, config, parse_int_list(args.k), ['subspace'])
    except EstimationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)

    rows = sweep_record_size(cfg, _progress('Bench K'))
    print(format_sweep_table(rows, 'K'))
    try:
        _emit(args, ['K', *SWEEP_HEADER], [list(r) for r in rows])
    except DataError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def do_sweep_n(args, config):
    """Subspace accuracy versus bin count at a fixed record size."""
    try:
        bin_counts = parse_int_list(args.n_bins_list)
        record_sizes = parse_int_list(args.k)
        if len(record_sizes) != 1:
            raise ConfigurationError(f"sweep-n takes a single --k value (got {args.k})")
        cfg = _campaign_config(args, config, record_sizes, ['subspace'], n_bins=bin_counts[0])
    except EstimationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)

    rows = sweep_bins(cfg, bin_counts, _progress('Bench K'))
    print(format_sweep_table(rows, 'N'))
    try:
        _emit(args, ['N', *SWEEP_HEADER], [list(r) for r in rows])
    except DataError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK
