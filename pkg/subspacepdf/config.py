import copy
import json
import os
import sys

from .baselines import L2FitConfig
from .errors import ConfigurationError
from .subspace import SolverConfig

DEFAULT_CONFIG = {
    "general": {
        "workers": 4,
        "verbose": False,
    },
    "solver": {
        "initial_step": 1.0,
        "max_halvings": 60,
        "grad_tol": 1e-8,
        "max_iters": 10000,
        "param_floor": 1e-6,
        "max_relative_step": 0.5,
        "armijo": 1e-4,
    },
    "l2": {
        "coarse_points": 200,
        "refine_iters": 60,
        "lo_factor": 0.05,
        "hi_factor": 5.0,
    },
    "bench": {
        "trials": 10000,
        "n_bins": 15,
        "master_seed": 0,
    },
    "residual": {
        "quad_points": 2001,
    },
}


def default_config_path():
    return os.path.join(os.path.expanduser("~"), ".subspacepdf", "config.json")


def load_config(config_path=None):
    """Defaults with the sections of the user's JSON file merged over them.

    An unreadable file is reported and ignored. Values are checked by the
    accessors below when a command asks for them.
    """
    if config_path is None:
        config_path = default_config_path()

    config = copy.deepcopy(DEFAULT_CONFIG)
    if not os.path.exists(config_path):
        return config

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            user_config = json.load(f)
    except (json.JSONDecodeError, OSError) as e:
        print(f"Warning: Could not load config from {config_path}: {e}", file=sys.stderr)
        return config
    if not isinstance(user_config, dict):
        print(f"Warning: Ignoring {config_path}: top level must be a JSON object", file=sys.stderr)
        return config

    for name, values in user_config.items():
        if isinstance(config.get(name), dict) and isinstance(values, dict):
            config[name].update(values)
        else:
            config[name] = values
    return config


def section(config, name):
    """The ``name`` section as a dict (empty when absent)."""
    values = config.get(name, {})
    if not isinstance(values, dict):
        raise ConfigurationError(f"Config section '{name}' must be an object (got {type(values).__name__})")
    return values


def get_workers(config):
    """Worker count from the ``general`` section."""
    workers = section(config, "general").get("workers", 4)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigurationError(f"general.workers must be an integer >= 1 (got {workers!r})")
    return workers


def is_verbose(config):
    return bool(section(config, "general").get("verbose", False))


def bench_setting(config, key):
    """One value of the ``bench`` section, falling back to the default."""
    return section(config, "bench").get(key, DEFAULT_CONFIG["bench"][key])


def solver_config(config, **overrides):
    """SolverConfig from the ``solver`` section; keyword overrides win when not None."""
    values = dict(section(config, "solver"))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SolverConfig(**values)
    except TypeError as e:
        raise ConfigurationError(f"Bad solver section: {e}") from None


def l2_settings(config):
    """(lo_factor, hi_factor, kwargs for L2FitConfig) from the ``l2`` section."""
    values = dict(section(config, "l2"))
    try:
        lo_factor = float(values.pop("lo_factor", 0.05))
        hi_factor = float(values.pop("hi_factor", 5.0))
    except (TypeError, ValueError):
        raise ConfigurationError("l2.lo_factor and l2.hi_factor must be numbers") from None
    unknown = set(values) - {"coarse_points", "refine_iters"}
    if unknown:
        raise ConfigurationError(f"Unknown l2 settings: {', '.join(sorted(unknown))}")
    return lo_factor, hi_factor, values


def l2_config(config, scale):
    """L2FitConfig around a rough scale estimate, using the ``l2`` section."""
    lo_factor, hi_factor, kwargs = l2_settings(config)
    return L2FitConfig.around(scale, lo_factor=lo_factor, hi_factor=hi_factor, **kwargs)
