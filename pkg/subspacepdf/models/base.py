from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np


class DensityModel(ABC):
    """Abstract base class for parametric density families.

    Subclasses implement the closed-form density, its analytic parameter
    gradient and a sampler. The public ``pdf``/``jacobian`` wrappers take care
    of the support so the closed forms are only evaluated where they are
    defined.
    """

    name: str = ''
    param_names: Tuple[str, ...] = ()
    # True where the parameter must stay strictly positive (scale parameters)
    positive: Tuple[bool, ...] = ()
    one_sided: bool = True
    # Long right tail; default histograms stop short of the sample maximum
    heavy_tailed: bool = False

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    def in_support(self, x: np.ndarray) -> np.ndarray:
        """Boolean mask of the abscissae inside the support."""
        return x > 0.0

    @abstractmethod
    def density(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        """Closed-form density for abscissae inside the support."""
        pass

    @abstractmethod
    def gradient(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        """Analytic d(density)/d(params) as an (len(x), L) array, inside the support."""
        pass

    @abstractmethod
    def draw(self, params: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``count`` i.i.d. variates."""
        pass

    @abstractmethod
    def default_range(self, params: np.ndarray) -> Tuple[float, float]:
        """Abscissa range covering the bulk of the density, used for noise-free grids."""
        pass

    def pdf(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mask = self.in_support(x)
        out = np.zeros_like(x)
        if mask.all():
            return self.density(x, params)
        if mask.any():
            out[mask] = self.density(x[mask], params)
        return out

    def jacobian(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mask = self.in_support(x)
        if mask.all():
            return self.gradient(x, params)
        out = np.zeros((x.shape[0], self.n_params))
        if mask.any():
            out[mask] = self.gradient(x[mask], params)
        return out

    def __repr__(self):
        return f"{type(self).__name__}()"
