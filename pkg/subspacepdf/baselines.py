"""Comparison estimators: direct L2 fit and closed-form Rayleigh estimators."""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma, gammaln

from .distributions import ParamVector
from .errors import ConfigurationError, DegenerateMeasurementError
from .measurement import MeasurementVector
from .models import ModelKind, get_model

# 1 - Gamma(1.5)^2 = 1 - pi/4
MOMENT_CONSTANT = 1.0 - gamma(1.5) ** 2

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class L2FitConfig:
    search_lo: float
    search_hi: float
    coarse_points: int = 200
    refine_iters: int = 60

    def __post_init__(self):
        if not (self.search_hi > self.search_lo > 0.0):
            raise ConfigurationError(
                f"L2 search needs search_hi > search_lo > 0 (got [{self.search_lo}, {self.search_hi}])"
            )
        if int(self.coarse_points) != self.coarse_points or self.coarse_points < 3:
            raise ConfigurationError(f"coarse_points must be an integer >= 3 (got {self.coarse_points})")
        if int(self.refine_iters) != self.refine_iters or self.refine_iters < 1:
            raise ConfigurationError(f"refine_iters must be an integer >= 1 (got {self.refine_iters})")

    @classmethod
    def around(cls, scale: float, lo_factor: float = 0.05, hi_factor: float = 5.0, **kwargs) -> 'L2FitConfig':
        """Search bounds proportional to a rough scale estimate."""
        return cls(search_lo=lo_factor * scale, search_hi=hi_factor * scale, **kwargs)


def _check_record(samples, min_size: int = 1) -> np.ndarray:
    record = np.asarray(samples, dtype=float).ravel()
    if record.size < min_size:
        raise DegenerateMeasurementError(f"Need at least {min_size} sample(s) (got {record.size})")
    if not np.all(np.isfinite(record)):
        raise DegenerateMeasurementError("Sample record contains non-finite values")
    if np.any(record < 0.0):
        raise DegenerateMeasurementError("Rayleigh samples must be >= 0")
    if not np.any(record > 0.0):
        raise DegenerateMeasurementError("Sample record is identically zero")
    return record


def _rms_scale(record: np.ndarray) -> float:
    return math.sqrt(float(np.sum(record * record)) / (2.0 * record.size))


def mle_coefficient(k: int) -> float:
    """Unbiasing factor 4^K K! (K-1)! sqrt(K) / ((2K)! sqrt(pi)), via log-gamma."""
    log_c = (k * math.log(4.0) + gammaln(k + 1) + gammaln(k) + 0.5 * math.log(k)
             - gammaln(2 * k + 1) - 0.5 * math.log(math.pi))
    return math.exp(log_c)


def bayes_coefficient(k: int) -> float:
    """sqrt(K Gamma(K + 0.5) / Gamma(K + 1.5)), via log-gamma."""
    return math.sqrt(k * math.exp(gammaln(k + 0.5) - gammaln(k + 1.5)))


def mle_rayleigh(samples) -> float:
    record = _check_record(samples)
    return mle_coefficient(record.size) * _rms_scale(record)


def bayes_rayleigh(samples) -> float:
    record = _check_record(samples)
    return bayes_coefficient(record.size) * _rms_scale(record)


def moment_rayleigh(samples) -> float:
    """sqrt(s^2 / (2 (1 - Gamma(1.5)^2))) with the K-1 sample variance.

    A Rayleigh variable has variance 2 sigma^2 (1 - pi/4), hence the factor 2.
    """
    record = _check_record(samples, min_size=2)
    s2 = float(np.var(record, ddof=1))
    if s2 <= 0.0:
        raise DegenerateMeasurementError("Sample variance is zero")
    return math.sqrt(s2 / (2.0 * MOMENT_CONSTANT))


def l2_objective(measurement: MeasurementVector, sigma: float, model=ModelKind.RAYLEIGH) -> float:
    """Euclidean distance between the histogram and the model vector at ``sigma``."""
    d = measurement.values - get_model(model).pdf(measurement.grid.points, np.array([sigma]))
    return math.sqrt(float(d @ d))


def golden_section(func: Callable[[float], float], a: float, b: float, iters: int) -> float:
    """Golden-section search for a minimum of ``func`` in [a, b] with a fixed iteration count."""
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + _INV_PHI_SQUARE * h
    d = a + _INV_PHI * h
    yc = func(c)
    yd = func(d)
    for _ in range(iters):
        if yc < yd:
            b, d, yd = d, c, yc
            h = _INV_PHI * h
            c = a + _INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            h = _INV_PHI * h
            d = a + _INV_PHI * h
            yd = func(d)
    return c if yc < yd else d


def l2_fit(measurement: MeasurementVector, config: Optional[L2FitConfig] = None,
           model=ModelKind.RAYLEIGH) -> float:
    """Scale minimising the L2 distance: coarse scan, then golden-section around the best point."""
    density = get_model(model)
    if density.n_params != 1:
        raise ConfigurationError(f"L2 fit supports one-parameter models only, not {density.name}")
    if not np.any(measurement.values > 0.0):
        raise DegenerateMeasurementError("Measurement is identically zero")
    if config is None:
        config = L2FitConfig.around(histogram_init(density, measurement).sigma)

    def objective(sigma):
        return l2_objective(measurement, sigma, density)

    coarse = np.linspace(config.search_lo, config.search_hi, config.coarse_points)
    scores = np.array([objective(s) for s in coarse])
    best = int(np.argmin(scores))
    lo = coarse[max(best - 1, 0)]
    hi = coarse[min(best + 1, coarse.size - 1)]
    refined = golden_section(objective, lo, hi, config.refine_iters)
    if objective(refined) <= scores[best]:
        return float(refined)
    return float(coarse[best])


def moment_init(model, samples) -> ParamVector:
    """Cheap starting point from the sample record."""
    density = get_model(model)
    if density.name == ModelKind.RAYLEIGH.value:
        return ParamVector(moment_rayleigh(samples))
    record = np.asarray(samples, dtype=float).ravel()
    if density.name == ModelKind.NORMAL_ZERO_MEAN.value:
        if record.size < 1 or not np.any(record != 0.0):
            raise DegenerateMeasurementError("Normal record is empty or identically zero")
        return ParamVector(math.sqrt(float(np.mean(record * record))))
    if record.size < 2 or np.any(record <= 0.0):
        raise DegenerateMeasurementError("Lognormal record needs >= 2 strictly positive samples")
    logs = np.log(record)
    spread = float(np.std(logs, ddof=1))
    if spread <= 0.0:
        raise DegenerateMeasurementError("Log-sample variance is zero")
    return ParamVector((spread, float(np.mean(logs))))


def histogram_init(model, measurement: MeasurementVector) -> ParamVector:
    """Starting point from the moments of the histogram itself (no record needed)."""
    density = get_model(model)
    x = measurement.grid.points
    weights = measurement.values * measurement.grid.widths
    total = float(weights.sum())
    if total <= 0.0:
        raise DegenerateMeasurementError("Measurement is identically zero")
    weights = weights / total
    if density.name == ModelKind.RAYLEIGH.value:
        return ParamVector(math.sqrt(float(weights @ (x * x)) / 2.0))
    if density.name == ModelKind.NORMAL_ZERO_MEAN.value:
        return ParamVector(math.sqrt(float(weights @ (x * x))))
    keep = x > 0.0
    logs = np.log(x[keep])
    w = weights[keep] / weights[keep].sum()
    mu = float(w @ logs)
    spread = math.sqrt(float(w @ (logs - mu) ** 2))
    if spread <= 0.0:
        raise DegenerateMeasurementError("Histogram mass sits in a single bin")
    return ParamVector((spread, mu))
