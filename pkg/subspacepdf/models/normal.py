import math

import numpy as np

from .base import DensityModel

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class NormalZeroMeanModel(DensityModel):
    """Zero-mean normal density, scale sigma, supported on the whole line."""

    name = 'normal'
    param_names = ('sigma',)
    positive = (True,)
    one_sided = False

    def in_support(self, x):
        return np.ones(np.shape(x), dtype=bool)

    def density(self, x, params):
        sigma = params[0]
        return _INV_SQRT_2PI / sigma * np.exp(-x * x / (2.0 * sigma * sigma))

    def gradient(self, x, params):
        sigma = params[0]
        p = self.density(x, params)
        return (p * (x * x - sigma * sigma) / sigma ** 3)[:, np.newaxis]

    def draw(self, params, count, rng):
        return params[0] * rng.standard_normal(count)

    def default_range(self, params):
        sigma = float(params[0])
        return -4.0 * sigma, 4.0 * sigma
