"""Nonlinear-subspace estimator.

The parameters follow the gradient flow ``xi' = J(xi)^T D(xi)`` where
``D = measurement - model_vector(xi)``. The flow is discretised with explicit
Euler steps. Each step starts from the exact line-search length of the
linearised problem along ``J^T D``, is shortened so no scale parameter moves
by more than ``max_relative_step`` of itself, and is then halved until ``V =
1/2 D^T D`` shows sufficient (Armijo) decrease. Every accepted step strictly
lowers V and the step length does not depend on the units of the data.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.integrate import simpson

from .distributions import ParamLike, ParamVector, SampleGrid, check_params
from .errors import (
    ConfigurationError,
    DegenerateMeasurementError,
    InvalidParameterError,
    RankDeficiencyError,
)
from .measurement import MeasurementVector
from .models import RayleighModel, get_model

logger = logging.getLogger(__name__)

_RAYLEIGH = RayleighModel()


@dataclass(frozen=True)
class SolverConfig:
    initial_step: float = 1.0
    max_halvings: int = 60
    grad_tol: float = 1e-8
    max_iters: int = 10000
    param_floor: float = 1e-6
    max_relative_step: float = 0.5
    armijo: float = 1e-4

    def __post_init__(self):
        for name in ('initial_step', 'grad_tol', 'param_floor', 'max_relative_step'):
            if not getattr(self, name) > 0.0:
                raise ConfigurationError(f"{name} must be > 0 (got {getattr(self, name)})")
        if not 0.0 < self.armijo < 1.0:
            raise ConfigurationError(f"armijo must lie in (0, 1) (got {self.armijo})")
        for name in ('max_halvings', 'max_iters'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigurationError(f"{name} must be an integer >= 1 (got {value})")


class Termination(str, Enum):
    GRADIENT_TOL = 'gradient-tol'
    MAX_ITERS = 'max-iters'
    STEP_FLOOR = 'step-floor'


class TraceEntry(NamedTuple):
    iteration: int
    xi: ParamVector
    value: float


@dataclass(frozen=True)
class EstimateResult:
    xi_final: ParamVector
    iterations: int
    trace: Tuple[TraceEntry, ...]
    termination: Termination

    @property
    def converged(self) -> bool:
        # StepFloor means no descent is left at float precision
        return self.termination is not Termination.MAX_ITERS


@dataclass(frozen=True, eq=False)
class StepResult:
    xi: ParamVector
    value: float
    step_size: float
    update: np.ndarray
    accepted: bool


@dataclass(frozen=True, eq=False)
class ErrorDecomposition:
    tangent: np.ndarray
    normal: np.ndarray


class _Objective:
    """Distance, Lyapunov value and tangent force on raw parameter arrays."""

    def __init__(self, measurement: MeasurementVector, model):
        self.model = get_model(model)
        self.x = measurement.grid.points
        self.target = measurement.values
        self.positive = np.array(self.model.positive, dtype=bool)

    def distance(self, params):
        return self.target - self.model.pdf(self.x, params)

    def jacobian(self, params):
        return self.model.jacobian(self.x, params)

    def force(self, params, d):
        return self.jacobian(params).T @ d

    def admissible(self, params, floor):
        return bool(np.all(params[self.positive] > floor))

    def first_step(self, params, jac, force, config):
        """initial_step * |F|^2 / |J F|^2, shortened to the relative cap on scale parameters."""
        eta = config.initial_step
        jf = jac @ force
        curvature = float(jf @ jf)
        if np.isfinite(curvature) and curvature > 0.0:
            eta *= float(force @ force) / curvature
        moves = np.abs(eta * force[self.positive])
        limits = config.max_relative_step * params[self.positive]
        over = moves > limits
        if np.any(over):
            eta *= float(np.min(limits[over] / moves[over]))
        return eta

    def line_search(self, params, value, jac, force, config):
        """First step halved until V drops by at least armijo * eta * |F|^2 with scales above the floor."""
        eta = self.first_step(params, jac, force, config)
        slope = float(force @ force)
        for _ in range(config.max_halvings + 1):
            candidate = params + eta * force
            if self.admissible(candidate, config.param_floor):
                d = self.distance(candidate)
                cand_value = 0.5 * float(d @ d)
                if cand_value < value and cand_value <= value - config.armijo * eta * slope:
                    return candidate, d, cand_value, eta
            eta *= 0.5
        return None


def distance(measurement: MeasurementVector, model, xi: ParamLike) -> np.ndarray:
    """D = measurement - model_vector(xi)."""
    params = check_params(model, xi)
    return _Objective(measurement, model).distance(params)


def tangent_force(measurement: MeasurementVector, model, xi: ParamLike) -> np.ndarray:
    """J(xi)^T D(xi), the right-hand side of the parameter flow."""
    params = check_params(model, xi)
    obj = _Objective(measurement, model)
    return obj.force(params, obj.distance(params))


def lyapunov_value(measurement: MeasurementVector, model, xi: ParamLike) -> float:
    """V = 1/2 D^T D."""
    d = distance(measurement, model, xi)
    return 0.5 * float(d @ d)


def step(measurement: MeasurementVector, model, xi: ParamLike,
         config: Optional[SolverConfig] = None) -> StepResult:
    """One safeguarded Euler step from ``xi``; returns ``xi`` unchanged when no step is admissible."""
    config = config or SolverConfig()
    params = check_params(model, xi)
    obj = _Objective(measurement, model)
    d = obj.distance(params)
    value = 0.5 * float(d @ d)
    jac = obj.jacobian(params)
    force = jac.T @ d
    found = obj.line_search(params, value, jac, force, config)
    if found is None:
        return StepResult(ParamVector(params), value, 0.0, np.zeros_like(params), False)
    candidate, _, cand_value, eta = found
    return StepResult(ParamVector(candidate), cand_value, eta, candidate - params, True)


def estimate(measurement: MeasurementVector, model, xi0: Optional[ParamLike] = None,
             config: Optional[SolverConfig] = None) -> EstimateResult:
    """Run the discretised flow from ``xi0`` until the force vanishes.

    Termination: ``GRADIENT_TOL`` when ||J^T D||_inf < grad_tol * max(1, ||xi||_inf)
    (checked first, so it wins a tie with the iteration limit), ``MAX_ITERS``,
    or ``STEP_FLOOR`` when no halving of the step lowers V.
    """
    config = config or SolverConfig()
    if not np.any(measurement.values > 0.0):
        raise DegenerateMeasurementError("Measurement is identically zero")
    if xi0 is None:
        from .baselines import histogram_init
        xi0 = histogram_init(model, measurement)
    params = check_params(model, xi0)

    obj = _Objective(measurement, model)
    if not obj.admissible(params, config.param_floor):
        raise InvalidParameterError(
            f"Initial parameters {tuple(params)} violate the floor {config.param_floor}"
        )

    d = obj.distance(params)
    value = 0.5 * float(d @ d)
    trace = [TraceEntry(0, ParamVector(params), value)]
    iterations = 0

    while True:
        jac = obj.jacobian(params)
        force = jac.T @ d
        if np.max(np.abs(force)) < config.grad_tol * max(1.0, float(np.max(np.abs(params)))):
            termination = Termination.GRADIENT_TOL
            break
        if iterations >= config.max_iters:
            termination = Termination.MAX_ITERS
            break
        found = obj.line_search(params, value, jac, force, config)
        if found is None:
            termination = Termination.STEP_FLOOR
            break
        params, d, value, _ = found
        iterations += 1
        trace.append(TraceEntry(iterations, ParamVector(params), value))

    logger.debug("Subspace estimate %s after %d iterations (%s), V=%.3g",
                 tuple(np.round(params, 6)), iterations, termination.value, value)
    return EstimateResult(
        xi_final=ParamVector(params),
        iterations=iterations,
        trace=tuple(trace),
        termination=termination,
    )


def decompose_error(error, model, grid: SampleGrid, xi: ParamLike) -> ErrorDecomposition:
    """Split ``error`` into its projection on the columns of J(xi) and the orthogonal rest."""
    params = check_params(model, xi)
    jac = get_model(model).jacobian(grid.points, params)
    e = np.asarray(error, dtype=float)
    if e.shape != grid.points.shape:
        raise InvalidParameterError(f"Error vector has shape {e.shape}, grid has {grid.size} points")

    eig = np.linalg.eigvalsh(jac.T @ jac)
    if not eig[-1] > 0.0 or eig[0] <= 1e-12 * eig[-1]:
        raise RankDeficiencyError(f"J^T J is singular at xi={tuple(params)} (eigenvalues {eig})")

    q, _ = np.linalg.qr(jac)
    tangent = q @ (q.T @ e)
    return ErrorDecomposition(tangent=tangent, normal=e - tangent)


def equilibrium_residual(xi: float, sigma0: float, quad_points: int = 2001) -> float:
    """Continuous Rayleigh analogue of J^T D at ``xi`` for a noise-free target ``sigma0``.

    Composite Simpson over [0, 8 max(xi, sigma0)]; defined up to a positive
    scale, taken as 1. Positive below ``sigma0`` and negative above it.
    """
    if not xi > 0.0 or not sigma0 > 0.0:
        raise InvalidParameterError(f"xi and sigma0 must be > 0 (got {xi}, {sigma0})")
    if int(quad_points) != quad_points or quad_points < 100:
        raise ConfigurationError(f"quad_points must be an integer >= 100 (got {quad_points})")
    n = int(quad_points) | 1
    x = np.linspace(0.0, 8.0 * max(xi, sigma0), n)
    cand = np.array([float(xi)])
    true = np.array([float(sigma0)])
    integrand = _RAYLEIGH.gradient(x, cand)[:, 0] * (_RAYLEIGH.density(x, true) - _RAYLEIGH.density(x, cand))
    return float(simpson(integrand, x=x))
