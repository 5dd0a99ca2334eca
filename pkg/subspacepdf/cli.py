import argparse
import logging
import sys

from .bench import ESTIMATORS
from .commands import EXIT_USAGE
from .commands.bench import do_bench, do_sweep_k, do_sweep_n
from .commands.estimate import do_estimate
from .commands.residual import do_residual
from .config import is_verbose, load_config
from .errors import ConfigurationError
from .models import ModelKind

MODEL_CHOICES = [kind.value for kind in ModelKind]


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_model_args(parser):
    parser.add_argument('--model', choices=MODEL_CHOICES, default='rayleigh', help='Density family (default: rayleigh)')
    parser.add_argument('--sigma0', type=float, default=1.0, help='True scale parameter (default: 1.0)')
    parser.add_argument('--mu0', type=float, default=0.0, help='True log-location for the lognormal model (default: 0.0)')


def _add_solver_args(parser):
    parser.add_argument('--xi0', help='Fixed start point, comma-separated (default: moment estimate)')
    parser.add_argument('--max-iters', type=int, default=None, help='Iteration cap for the subspace flow')


def build_parser():
    parser = ArgumentParser(prog='spdf', description='Subspace PDF - parametric density estimation from histograms')
    parser.add_argument('--config', dest='config_path', default=None, help='Path to config file (default: ~/.subspacepdf/config.json)')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging on stderr')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('estimate', help='Estimate parameters from one record')
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument('--estimator', choices=list(ESTIMATORS), default='subspace')
    source = p.add_mutually_exclusive_group()
    source.add_argument('--input', help='Sample file, one value per line')
    source.add_argument('--record', help='Inline samples, comma or whitespace separated')
    source.add_argument('--exact', action='store_true', help='Use the noise-free model vector at the true parameters')
    p.add_argument('--k', type=int, default=100, help='Synthetic record size when no input is given (default: 100)')
    p.add_argument('--n-bins', dest='n_bins', type=int, default=None, help='Histogram bins (default: config bench.n_bins)')
    p.add_argument('--seed', type=int, default=None, help='Seed for the synthetic record')
    p.add_argument('--out', help='Write the iteration trace as CSV')
    p.set_defaults(func=do_estimate)

    p = sub.add_parser('bench', help='Monte-Carlo comparison of the estimators')
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument('--k', default='30', help='Record sizes, comma-separated (default: 30)')
    p.add_argument('--n-bins', dest='n_bins', type=int, default=None, help='Histogram bins (default: config bench.n_bins)')
    p.add_argument('--trials', type=int, default=None, help='Trials per record size (default: config bench.trials)')
    p.add_argument('--seed', type=int, default=None, help='Master seed (default: config bench.master_seed)')
    p.add_argument('--estimators', default=','.join(ESTIMATORS), help='Estimators, comma-separated')
    p.add_argument('--compare', action='store_true', help='Show published reference values next to the results')
    p.add_argument('--out', help='Write the statistics as CSV')
    p.set_defaults(func=do_bench)

    p = sub.add_parser('sweep-k', help='Subspace accuracy versus record size')
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument('--k', default='25,50,100,200,400', help='Record sizes, comma-separated')
    p.add_argument('--n-bins', dest='n_bins', type=int, default=None, help='Histogram bins (default: config bench.n_bins)')
    p.add_argument('--trials', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--out', help='Write the sweep as CSV')
    p.set_defaults(func=do_sweep_k)

    p = sub.add_parser('sweep-n', help='Subspace accuracy versus bin count')
    _add_model_args(p)
    _add_solver_args(p)
    p.add_argument('--k', default='50', help='Record size (default: 50)')
    p.add_argument('--n-bins', dest='n_bins_list', default='10,15,25,40,60', help='Bin counts, comma-separated')
    p.add_argument('--trials', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--out', help='Write the sweep as CSV')
    p.set_defaults(func=do_sweep_n)

    p = sub.add_parser('residual', help='Scan the equilibrium residual of the Rayleigh flow')
    p.add_argument('--sigma0', type=float, default=1.0)
    p.add_argument('--lo', type=float, default=0.2)
    p.add_argument('--hi', type=float, default=3.0)
    p.add_argument('--step', type=float, default=0.01)
    p.add_argument('--quad-points', dest='quad_points', type=int, default=None)
    p.add_argument('--out', help='Write the curve as CSV (default: stdout)')
    p.set_defaults(func=do_residual)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = load_config(args.config_path)
    try:
        verbose = args.verbose or is_verbose(config)
    except ConfigurationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    return args.func(args, config)
