"""Parametric density families evaluated on sample grids.

The functions here are thin, validated entry points over the model classes in
:mod:`subspacepdf.models`. Parameters are checked once when a
:class:`ParamVector` is built; the model classes then work on raw arrays.
"""
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidParameterError
from .models import DensityModel, ModelKind, get_model

ParamLike = Union['ParamVector', float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class ParamVector:
    """Ordered distribution parameters; ``values[0]`` is always the scale sigma."""

    values: Tuple[float, ...]

    def __post_init__(self):
        try:
            values = tuple(float(v) for v in np.atleast_1d(self.values))
        except (TypeError, ValueError) as e:
            raise InvalidParameterError(f"Parameters must be real numbers: {e}") from None
        if not values:
            raise InvalidParameterError("Parameter vector is empty")
        if not all(math.isfinite(v) for v in values):
            raise InvalidParameterError(f"Parameters must be finite: {values}")
        if values[0] <= 0.0:
            raise InvalidParameterError(f"sigma must be > 0 (got {values[0]})")
        object.__setattr__(self, 'values', values)

    @property
    def sigma(self) -> float:
        return self.values[0]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, idx):
        return self.values[idx]


def check_params(model, xi: ParamLike) -> np.ndarray:
    """Validate ``xi`` against ``model`` and return it as a float array."""
    density = get_model(model)
    pv = xi if isinstance(xi, ParamVector) else ParamVector(xi)
    if len(pv) != density.n_params:
        raise InvalidParameterError(
            f"{density.name} takes {density.n_params} parameter(s) "
            f"{density.param_names}, got {len(pv)}"
        )
    return pv.as_array()


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """Ordered abscissae with the bin width attached to each point.

    ``edges`` is kept when the grid comes from binning so that histogram
    counts use the exact bin boundaries instead of re-deriving them from
    centers and widths.
    """

    points: np.ndarray
    widths: np.ndarray
    edges: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        points = _readonly(np.atleast_1d(self.points))
        widths = _readonly(np.atleast_1d(self.widths))
        if points.ndim != 1 or points.shape != widths.shape or points.size == 0:
            raise InvalidParameterError("Grid points and widths must be non-empty 1-D arrays of equal length")
        if not np.all(np.isfinite(points)) or np.any(np.diff(points) <= 0.0):
            raise InvalidParameterError("Grid points must be finite and strictly increasing")
        if np.any(~(widths > 0.0)):
            raise InvalidParameterError("Grid widths must all be > 0")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'widths', widths)
        if self.edges is None:
            edges = np.append(points - widths / 2.0, points[-1] + widths[-1] / 2.0)
        else:
            edges = np.atleast_1d(self.edges)
            if edges.shape != (points.size + 1,) or np.any(np.diff(edges) <= 0.0):
                raise InvalidParameterError("Grid edges must be N+1 strictly increasing values")
        object.__setattr__(self, 'edges', _readonly(edges))

    @classmethod
    def from_edges(cls, edges: Iterable[float]) -> 'SampleGrid':
        edges = np.asarray(list(edges), dtype=float)
        return cls(points=(edges[:-1] + edges[1:]) / 2.0, widths=np.diff(edges), edges=edges)

    @property
    def size(self) -> int:
        return int(self.points.size)

    def __len__(self):
        return self.size


def pdf_value(model, x: float, xi: ParamLike) -> float:
    """Density of ``model`` at ``x``; 0 outside the support."""
    params = check_params(model, xi)
    return float(get_model(model).pdf(np.array([float(x)]), params)[0])


def pdf_gradient(model, x: float, xi: ParamLike) -> np.ndarray:
    """Analytic gradient of the density with respect to the L parameters."""
    params = check_params(model, xi)
    return get_model(model).jacobian(np.array([float(x)]), params)[0]


def model_vector(model, grid: SampleGrid, xi: ParamLike) -> np.ndarray:
    """Model densities at every grid point."""
    params = check_params(model, xi)
    return get_model(model).pdf(grid.points, params)


def jacobian(model, grid: SampleGrid, xi: ParamLike) -> np.ndarray:
    """N x L matrix of parameter derivatives of the model vector."""
    params = check_params(model, xi)
    return get_model(model).jacobian(grid.points, params)


def sample(model, xi: ParamLike, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` i.i.d. variates; the same seed always gives the same record."""
    params = check_params(model, xi)
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise InvalidParameterError(f"Sample count must be an integer >= 1 (got {count})")
    rng = np.random.default_rng(seed)
    return get_model(model).draw(params, int(count), rng)


__all__ = [
    'DensityModel',
    'ModelKind',
    'ParamVector',
    'SampleGrid',
    'check_params',
    'get_model',
    'jacobian',
    'model_vector',
    'pdf_gradient',
    'pdf_value',
    'sample',
]
