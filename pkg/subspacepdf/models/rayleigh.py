import numpy as np

from .base import DensityModel


class RayleighModel(DensityModel):
    """Rayleigh density x/s^2 exp(-x^2 / 2s^2) on x >= 0."""

    name = 'rayleigh'
    param_names = ('sigma',)
    positive = (True,)
    one_sided = True

    def in_support(self, x):
        return x >= 0.0

    def density(self, x, params):
        s2 = params[0] * params[0]
        return x / s2 * np.exp(-x * x / (2.0 * s2))

    def gradient(self, x, params):
        sigma = params[0]
        s2 = sigma * sigma
        g = x * np.exp(-x * x / (2.0 * s2)) * (x * x - 2.0 * s2) / sigma ** 5
        return g[:, np.newaxis]

    def draw(self, params, count, rng):
        # inverse transform with U on (0, 1]
        u = 1.0 - rng.random(count)
        return params[0] * np.sqrt(-2.0 * np.log(u))

    def default_range(self, params):
        return 0.0, 4.0 * float(params[0])
