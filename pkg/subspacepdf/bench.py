"""Seeded Monte-Carlo campaigns comparing the estimators.

Every trial record is drawn from a seed derived from (master_seed, K, trial
index) only, so all estimators in a cell see the same record, sweeps over
the bin count reuse the same records, and results do not depend on how
trials are scheduled.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .baselines import (
    bayes_rayleigh,
    l2_fit,
    L2FitConfig,
    mle_rayleigh,
    moment_init,
    moment_rayleigh,
)
from .distributions import ParamVector, check_params, sample
from .errors import ConfigurationError, EstimationError
from .measurement import build_grid, default_policy, histogram_density
from .models import ModelKind, get_model
from .parallel import ordered_map
from .subspace import SolverConfig, equilibrium_residual, estimate

logger = logging.getLogger(__name__)

ESTIMATORS = ('subspace', 'l2', 'mle', 'bayes', 'moment')
_RAYLEIGH_ONLY = frozenset({'mle', 'bayes', 'moment'})
_ONE_PARAMETER_ONLY = frozenset({'l2'})

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, record_size: int, trial: int) -> int:
    """64-bit seed for one trial record: splitmix64 folded over (master_seed, K, trial)."""
    state = _splitmix64(int(master_seed) & _MASK64)
    state = _splitmix64(state ^ (int(record_size) & _MASK64))
    return _splitmix64(state ^ (int(trial) & _MASK64))


@dataclass(frozen=True)
class FixedStart:
    values: ParamVector


@dataclass(frozen=True)
class MomentStart:
    pass


InitPolicy = Union[FixedStart, MomentStart]


@dataclass(frozen=True)
class CampaignConfig:
    model: ModelKind = ModelKind.RAYLEIGH
    true_params: ParamVector = ParamVector(1.0)
    record_sizes: Tuple[int, ...] = (30,)
    n_bins: int = 15
    trials: int = 10000
    estimators: Tuple[str, ...] = ESTIMATORS
    master_seed: int = 0
    xi0_policy: InitPolicy = MomentStart()
    solver: SolverConfig = SolverConfig()
    l2_bounds: Tuple[float, float] = (0.05, 5.0)
    l2_coarse_points: int = 200
    l2_refine_iters: int = 60
    workers: int = 1

    def __post_init__(self):
        density = get_model(self.model)
        object.__setattr__(self, 'model', ModelKind(density.name))
        check_params(self.model, self.true_params)
        if not isinstance(self.true_params, ParamVector):
            object.__setattr__(self, 'true_params', ParamVector(self.true_params))
        sizes = tuple(int(k) for k in self.record_sizes)
        if not sizes:
            raise ConfigurationError("record_sizes must not be empty")
        if min(sizes) < 2:
            raise ConfigurationError(f"Every record size must be >= 2 (got {sizes})")
        object.__setattr__(self, 'record_sizes', sizes)
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError(f"trials must be an integer >= 1 (got {self.trials})")
        if self.n_bins < 2:
            raise ConfigurationError(f"n_bins must be >= 2 (got {self.n_bins})")
        names = tuple(self.estimators)
        if not names:
            raise ConfigurationError("estimators must not be empty")
        for name in names:
            if name not in ESTIMATORS:
                raise ConfigurationError(f"Unknown estimator '{name}' (use {'|'.join(ESTIMATORS)})")
            if name in _RAYLEIGH_ONLY and self.model is not ModelKind.RAYLEIGH:
                raise ConfigurationError(f"Estimator '{name}' is defined for the Rayleigh model only")
            if name in _ONE_PARAMETER_ONLY and density.n_params != 1:
                raise ConfigurationError(f"Estimator '{name}' needs a one-parameter model")
        object.__setattr__(self, 'estimators', names)
        if isinstance(self.xi0_policy, FixedStart):
            check_params(self.model, self.xi0_policy.values)
        elif not isinstance(self.xi0_policy, MomentStart):
            raise ConfigurationError(f"Unknown initialisation policy {self.xi0_policy!r}")
        lo, hi = self.l2_bounds
        if not hi > lo > 0.0:
            raise ConfigurationError(f"l2_bounds need hi > lo > 0 (got {self.l2_bounds})")


@dataclass(frozen=True)
class TrialStats:
    estimator: str
    record_size: int
    n_bins: int
    trials: int
    mean: float
    variance: float
    failures: int
    parameter: str = 'sigma'

    @property
    def label(self) -> str:
        """Estimator id, suffixed with the parameter for anything but sigma."""
        if self.parameter == 'sigma':
            return self.estimator
        return f"{self.estimator}[{self.parameter}]"

    @property
    def successes(self) -> int:
        return self.trials - self.failures


class SweepRow(NamedTuple):
    value: int
    mean: float
    variance: float
    failures: int


def _estimate_subspace(config, record, measurement):
    if isinstance(config.xi0_policy, FixedStart):
        xi0 = config.xi0_policy.values
    else:
        xi0 = moment_init(config.model, record)
    result = estimate(measurement, config.model, xi0, config.solver)
    if not result.converged:
        raise EstimationError(f"Subspace estimate did not converge in {result.iterations} iterations")
    return result.xi_final.as_array()


def _estimate_l2(config, record, measurement):
    scale = moment_init(config.model, record).sigma
    fit_config = L2FitConfig.around(
        scale,
        lo_factor=config.l2_bounds[0],
        hi_factor=config.l2_bounds[1],
        coarse_points=config.l2_coarse_points,
        refine_iters=config.l2_refine_iters,
    )
    return np.array([l2_fit(measurement, fit_config, config.model)])


def _closed_form(func):
    def run(config, record, measurement):
        return np.array([func(record)])
    return run


_ESTIMATOR_FUNCS = {
    'subspace': _estimate_subspace,
    'l2': _estimate_l2,
    'mle': _closed_form(mle_rayleigh),
    'bayes': _closed_form(bayes_rayleigh),
    'moment': _closed_form(moment_rayleigh),
}

_NEEDS_HISTOGRAM = frozenset({'subspace', 'l2'})

_TRIAL_ERRORS = (EstimationError, ArithmeticError, ValueError, np.linalg.LinAlgError)


def run_trial(config: CampaignConfig, record_size: int, trial: int) -> Dict[str, Optional[np.ndarray]]:
    """Estimates of every configured estimator on one seeded record (None marks a failure)."""
    seed = trial_seed(config.master_seed, record_size, trial)
    record = sample(config.model, config.true_params, record_size, seed)

    measurement = None
    histogram_error = None
    if _NEEDS_HISTOGRAM.intersection(config.estimators):
        try:
            grid = build_grid(record, default_policy(config.model, config.n_bins), config.model)
            measurement = histogram_density(record, grid)
        except EstimationError as e:
            histogram_error = e

    estimates = {}
    for name in config.estimators:
        try:
            if name in _NEEDS_HISTOGRAM and histogram_error is not None:
                raise histogram_error
            estimates[name] = _ESTIMATOR_FUNCS[name](config, record, measurement)
        except _TRIAL_ERRORS as e:
            logger.debug("Trial %d (K=%d) %s failed: %s", trial, record_size, name, e)
            estimates[name] = None
    return estimates


def summarize(estimator: str, record_size: int, n_bins: int, values: Sequence[Optional[float]],
              parameter: str = 'sigma') -> TrialStats:
    """Mean and (K-1)-denominator variance over the successful trials, in trial order."""
    kept = np.array([v for v in values if v is not None], dtype=float)
    failures = len(values) - kept.size
    mean = float(np.mean(kept)) if kept.size else math.nan
    variance = float(np.var(kept, ddof=1)) if kept.size >= 2 else 0.0
    return TrialStats(
        estimator=estimator,
        record_size=record_size,
        n_bins=n_bins,
        trials=len(values),
        mean=mean,
        variance=variance,
        failures=failures,
        parameter=parameter,
    )


def run_campaign(config: CampaignConfig,
                 progress_callback: Optional[Callable[[int, int, int], None]] = None) -> List[TrialStats]:
    """TrialStats for every (K, estimator, parameter) cell, in configuration order.

    ``progress_callback`` receives (K, completed, total).
    """
    density = get_model(config.model)
    stats = []
    for record_size in config.record_sizes:
        logger.info("Campaign cell K=%d N=%d: %d trials, estimators %s",
                    record_size, config.n_bins, config.trials, ','.join(config.estimators))

        def _progress(completed, total, _k=record_size):
            if progress_callback:
                progress_callback(_k, completed, total)

        results = ordered_map(
            lambda trial, _k=record_size: run_trial(config, _k, trial),
            range(config.trials),
            workers=config.workers,
            progress_callback=_progress,
        )
        for name in config.estimators:
            per_trial = [r[name] for r in results]
            n_out = density.n_params if name == 'subspace' else 1
            for idx in range(n_out):
                values = [None if v is None else float(v[idx]) for v in per_trial]
                stats.append(summarize(name, record_size, config.n_bins, values, density.param_names[idx]))
    return stats


def _scale_rows(stats: List[TrialStats], key: Callable[[TrialStats], int]) -> List[SweepRow]:
    return [
        SweepRow(key(s), s.mean, s.variance, s.failures)
        for s in stats
        if s.estimator == 'subspace' and s.parameter == 'sigma'
    ]


def sweep_record_size(config: CampaignConfig, progress_callback=None) -> List[SweepRow]:
    """Subspace sigma statistics for each record size in ``config.record_sizes``."""
    config = dataclasses.replace(config, estimators=('subspace',))
    stats = run_campaign(config, progress_callback)
    return _scale_rows(stats, lambda s: s.record_size)


def sweep_bins(config: CampaignConfig, bin_counts: Sequence[int], progress_callback=None) -> List[SweepRow]:
    """Subspace sigma statistics for each bin count at the single configured record size."""
    if len(config.record_sizes) != 1:
        raise ConfigurationError(f"A bin sweep needs exactly one record size (got {config.record_sizes})")
    bin_counts = [int(n) for n in bin_counts]
    if not bin_counts:
        raise ConfigurationError("bin_counts must not be empty")
    rows = []
    for n_bins in bin_counts:
        cell = dataclasses.replace(config, n_bins=n_bins, estimators=('subspace',))
        rows.extend(_scale_rows(run_campaign(cell, progress_callback), lambda s: s.n_bins))
    return rows


def residual_scan(lo: float, hi: float, step: float) -> np.ndarray:
    """Scan points lo, lo + step, ... <= hi, rounded to 12 decimals so hits land exactly."""
    if not (lo > 0.0 and hi > lo and step > 0.0):
        raise ConfigurationError(f"Invalid scan [{lo}, {hi}] with step {step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def emit_residual_curve(sigma0: float, lo: float, hi: float, step: float,
                        quad_points: int = 2001) -> List[Tuple[float, float]]:
    """(xi, residual) rows of the equilibrium residual over the scan."""
    return [
        (float(xi), equilibrium_residual(float(xi), sigma0, quad_points))
        for xi in residual_scan(lo, hi, step)
    ]


def sign_changes(rows: Sequence[Tuple[float, float]]) -> List[float]:
    """Abscissae where the residual changes sign, by linear interpolation; exact zeros are skipped."""
    locations = []
    previous = None
    for x, r in rows:
        if r == 0.0 or math.isnan(r):
            continue
        if previous is not None and (previous[1] > 0.0) != (r > 0.0):
            x0, r0 = previous
            locations.append(x0 + (x - x0) * r0 / (r0 - r))
        previous = (x, r)
    return locations
