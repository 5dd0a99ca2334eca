import math

import numpy as np

from .base import DensityModel

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class LognormalModel(DensityModel):
    """Lognormal density on x > 0 with log-scale sigma and log-location mu."""

    name = 'lognormal'
    param_names = ('sigma', 'mu')
    positive = (True, False)
    one_sided = True
    heavy_tailed = True

    def density(self, x, params):
        sigma, mu = params[0], params[1]
        z = np.log(x) - mu
        return _INV_SQRT_2PI / (x * sigma) * np.exp(-z * z / (2.0 * sigma * sigma))

    def gradient(self, x, params):
        sigma, mu = params[0], params[1]
        z = np.log(x) - mu
        p = _INV_SQRT_2PI / (x * sigma) * np.exp(-z * z / (2.0 * sigma * sigma))
        d_sigma = p * (z * z - sigma * sigma) / sigma ** 3
        d_mu = p * z / (sigma * sigma)
        return np.column_stack((d_sigma, d_mu))

    def draw(self, params, count, rng):
        return np.exp(params[1] + params[0] * rng.standard_normal(count))

    def default_range(self, params):
        sigma, mu = float(params[0]), float(params[1])
        return 0.0, math.exp(mu + 2.0 * sigma)
