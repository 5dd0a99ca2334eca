from enum import Enum

from ..errors import ConfigurationError
from .base import DensityModel
from .lognormal import LognormalModel
from .normal import NormalZeroMeanModel
from .rayleigh import RayleighModel


class ModelKind(str, Enum):
    RAYLEIGH = 'rayleigh'
    NORMAL_ZERO_MEAN = 'normal'
    LOGNORMAL = 'lognormal'


_REGISTRY = {
    ModelKind.RAYLEIGH: RayleighModel(),
    ModelKind.NORMAL_ZERO_MEAN: NormalZeroMeanModel(),
    ModelKind.LOGNORMAL: LognormalModel(),
}


def get_model(kind) -> DensityModel:
    """Return the density model for a ModelKind, its string tag, or a model instance."""
    if isinstance(kind, DensityModel):
        return kind
    try:
        return _REGISTRY[ModelKind(kind)]
    except ValueError:
        choices = '|'.join(k.value for k in ModelKind)
        raise ConfigurationError(f"Unknown model '{kind}' (use {choices})") from None


__all__ = [
    'DensityModel',
    'LognormalModel',
    'ModelKind',
    'NormalZeroMeanModel',
    'RayleighModel',
    'get_model',
]
