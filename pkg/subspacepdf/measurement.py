"""Histogram measurement vectors built from finite sample records."""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .distributions import ParamLike, SampleGrid, check_params
from .errors import ConfigurationError, DegenerateMeasurementError, DegenerateRangeError
from .models import get_model

logger = logging.getLogger(__name__)


class RangeRule(str, Enum):
    DATA_MAX = 'data-max'
    DATA_MIN_MAX = 'data-min-max'
    DATA_MIN_QUANTILE = 'data-min-quantile'
    FIXED = 'fixed'


@dataclass(frozen=True)
class GridPolicy:
    n_bins: int = 15
    range_rule: RangeRule = RangeRule.DATA_MAX
    lo: Optional[float] = None
    hi: Optional[float] = None
    upper_quantile: float = 0.95

    def __post_init__(self):
        if int(self.n_bins) != self.n_bins or self.n_bins < 2:
            raise ConfigurationError(f"n_bins must be an integer >= 2 (got {self.n_bins})")
        object.__setattr__(self, 'range_rule', RangeRule(self.range_rule))
        if self.range_rule is RangeRule.FIXED:
            if self.lo is None or self.hi is None:
                raise ConfigurationError("A fixed range needs both lo and hi")
            if not self.hi > self.lo:
                raise ConfigurationError(f"Fixed range needs hi > lo (got [{self.lo}, {self.hi}])")
        if not 0.5 < self.upper_quantile <= 1.0:
            raise ConfigurationError(f"upper_quantile must lie in (0.5, 1] (got {self.upper_quantile})")

    @classmethod
    def fixed(cls, lo: float, hi: float, n_bins: int = 15) -> 'GridPolicy':
        return cls(n_bins=n_bins, range_rule=RangeRule.FIXED, lo=float(lo), hi=float(hi))


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    """Histogram density estimate on a grid.

    ``record_size`` is the number of samples K the histogram was built from
    (0 for noise-free measurements); ``dropped`` counts samples that fell
    outside the binned range.
    """

    grid: SampleGrid
    values: np.ndarray
    record_size: int
    dropped: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.points.shape:
            raise DegenerateMeasurementError(
                f"Measurement has {values.size} values for a {self.grid.size}-point grid"
            )
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise DegenerateMeasurementError("Measurement values must be finite and >= 0")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def mass(self) -> float:
        """Total probability mass carried by the histogram (kept / K)."""
        return float(np.sum(self.values * self.grid.widths))


def default_policy(model, n_bins: int = 15) -> GridPolicy:
    """Bins over [min, max] of the record, like MATLAB's hist(x, N).

    Heavy-tailed models (lognormal) stop at the 95th percentile instead of the
    maximum so the mode is not squeezed into the first bin.
    """
    if get_model(model).heavy_tailed:
        return GridPolicy(n_bins=n_bins, range_rule=RangeRule.DATA_MIN_QUANTILE)
    return GridPolicy(n_bins=n_bins, range_rule=RangeRule.DATA_MIN_MAX)


def _as_record(samples) -> np.ndarray:
    record = np.asarray(samples, dtype=float).ravel()
    if record.size and not np.all(np.isfinite(record)):
        raise DegenerateMeasurementError("Sample record contains non-finite values")
    return record


def build_grid(samples, policy: GridPolicy, model) -> SampleGrid:
    """Equal-width bins over the policy range; grid points are the bin centers."""
    density = get_model(model)
    if policy.range_rule is RangeRule.FIXED:
        lo, hi = policy.lo, policy.hi
    else:
        record = _as_record(samples)
        if record.size < 2:
            raise DegenerateMeasurementError(f"Need at least 2 samples to size a grid (got {record.size})")
        if record.min() == record.max():
            raise DegenerateRangeError(f"All {record.size} samples are equal to {record[0]}")
        if policy.range_rule is RangeRule.DATA_MIN_QUANTILE:
            hi = float(np.quantile(record, policy.upper_quantile))
        else:
            hi = float(record.max())
        if policy.range_rule is RangeRule.DATA_MAX and density.one_sided:
            lo = 0.0
        else:
            # DataMax on a two-sided model widens to [min, max]
            lo = float(record.min())
    if not hi > lo:
        raise DegenerateRangeError(f"Grid range collapsed to [{lo}, {hi}]")

    edges = np.linspace(lo, hi, policy.n_bins + 1)
    width = (hi - lo) / policy.n_bins
    return SampleGrid(
        points=(edges[:-1] + edges[1:]) / 2.0,
        widths=np.full(policy.n_bins, width),
        edges=edges,
    )


def histogram_density(samples, grid: SampleGrid) -> MeasurementVector:
    """Density-normalised histogram: count_i / (K * width_i).

    Bins are half-open on the right except the last one. Samples outside the
    grid are dropped and reported in ``dropped``.
    """
    record = _as_record(samples)
    if record.size < 1:
        raise DegenerateMeasurementError("Cannot build a histogram from an empty record")
    counts, _ = np.histogram(record, bins=grid.edges)
    kept = int(counts.sum())
    dropped = int(record.size) - kept
    if dropped:
        logger.debug("Histogram dropped %d of %d samples outside [%g, %g]",
                     dropped, record.size, grid.edges[0], grid.edges[-1])
    values = counts / (record.size * grid.widths)
    return MeasurementVector(grid=grid, values=values, record_size=int(record.size), dropped=dropped)


def measure(samples, model, policy: Optional[GridPolicy] = None) -> MeasurementVector:
    """Grid and histogram in one call, with the model's default policy."""
    if policy is None:
        policy = default_policy(model)
    return histogram_density(samples, build_grid(samples, policy, model))


def default_grid(model, xi: ParamLike, n_bins: int = 15) -> SampleGrid:
    """Equal bins over the model's bulk range, used for noise-free runs."""
    params = check_params(model, xi)
    lo, hi = get_model(model).default_range(params)
    return SampleGrid.from_edges(np.linspace(lo, hi, GridPolicy(n_bins=n_bins).n_bins + 1))


def noise_free(model, grid: SampleGrid, xi: ParamLike) -> MeasurementVector:
    """Measurement equal to the exact model vector (record_size 0)."""
    params = check_params(model, xi)
    return MeasurementVector(grid=grid, values=get_model(model).pdf(grid.points, params), record_size=0)
