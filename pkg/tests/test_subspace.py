import math

import numpy as np
import pytest

from subspacepdf.distributions import SampleGrid, jacobian, model_vector, sample
from subspacepdf.errors import (
    ConfigurationError,
    DegenerateMeasurementError,
    InvalidParameterError,
    RankDeficiencyError,
)
from subspacepdf.measurement import GridPolicy, MeasurementVector, default_grid, measure, noise_free
from subspacepdf.subspace import (
    SolverConfig,
    Termination,
    decompose_error,
    distance,
    equilibrium_residual,
    estimate,
    lyapunov_value,
    step,
    tangent_force,
)

@pytest.fixture
def one_point():
    grid = SampleGrid(points=[1.0], widths=[1.0])
    return MeasurementVector(grid=grid, values=[0.7], record_size=0)


def _orthogonal_to_jacobian(jac, rng, scale):
    r = rng.standard_normal(jac.shape[0])
    q, _ = np.linalg.qr(jac)
    e = r - q @ (q.T @ r)
    return scale * e / np.max(np.abs(e))


def test_single_point_distance_force_and_value(one_point):
    d = distance(one_point, 'rayleigh', 1.0)
    np.testing.assert_allclose(d, [0.7 - math.exp(-0.5)], rtol=1e-12)
    assert tangent_force(one_point, 'rayleigh', 1.0)[0] == pytest.approx(-0.056692, abs=1e-6)
    assert lyapunov_value(one_point, 'rayleigh', 1.0) == pytest.approx(0.0043682, abs=1e-7)


def test_zero_distance_at_the_measured_parameters(rayleigh_grid):
    m = noise_free('rayleigh', rayleigh_grid, 1.2)
    assert np.all(distance(m, 'rayleigh', 1.2) == 0.0)
    assert np.all(tangent_force(m, 'rayleigh', 1.2) == 0.0)
    assert lyapunov_value(m, 'rayleigh', 1.2) == 0.0
    d = distance(m, 'rayleigh', 2.0)
    np.testing.assert_allclose(d, model_vector('rayleigh', rayleigh_grid, 1.2) - model_vector('rayleigh', rayleigh_grid, 2.0))


def test_orthogonal_noise_leaves_the_parameters_alone(rayleigh_grid):
    rng = np.random.default_rng(4)
    jac = jacobian('rayleigh', rayleigh_grid, 1.0)
    psi = model_vector('rayleigh', rayleigh_grid, 1.0)
    e = _orthogonal_to_jacobian(jac, rng, scale=1e-3)
    assert np.all(psi + e >= 0.0)
    noisy = MeasurementVector(grid=rayleigh_grid, values=psi + e, record_size=0)
    assert np.max(np.abs(tangent_force(noisy, 'rayleigh', 1.0))) < 1e-12
    result = step(noisy, 'rayleigh', 1.0)
    assert np.max(np.abs(result.update)) < 1e-12


@pytest.mark.parametrize("model,xi", [('rayleigh', (1.3,)), ('lognormal', (0.8, 0.4))])
def test_force_is_the_negative_gradient_of_v(model, xi):
    record = sample(model, (1.0,) if model == 'rayleigh' else (1.0, 0.5), 200, seed=9)
    m = measure(record, model, GridPolicy(n_bins=15))
    force = tangent_force(m, model, xi)
    for j in range(len(xi)):
        h = 1e-6
        up, down = list(xi), list(xi)
        up[j] += h
        down[j] -= h
        numeric = -(lyapunov_value(m, model, up) - lyapunov_value(m, model, down)) / (2.0 * h)
        assert force[j] == pytest.approx(numeric, rel=1e-5, abs=1e-10)


def test_step_lowers_v(rayleigh_grid):
    m = noise_free('rayleigh', rayleigh_grid, 1.0)
    before = lyapunov_value(m, 'rayleigh', 2.5)
    result = step(m, 'rayleigh', 2.5)
    assert result.accepted
    assert result.value < before
    assert result.step_size > 0.0
    # the scale moves by at most half of itself
    assert result.xi.sigma >= 2.5 * 0.5 - 1e-12
    assert result.xi.sigma == pytest.approx(2.5 + result.update[0])


def test_noise_free_rayleigh_converges(rayleigh_grid):
    m = noise_free('rayleigh', rayleigh_grid, 1.0)
    result = estimate(m, 'rayleigh', 2.5)
    assert result.converged
    assert abs(result.xi_final.sigma - 1.0) < 1e-3
    assert result.trace[0].xi.sigma == 2.5
    assert result.trace[-1].xi == result.xi_final
    assert len(result.trace) == result.iterations + 1


@pytest.mark.parametrize("sigma0", [0.5, 1.0, 2.0, 4.0])
@pytest.mark.parametrize("n_bins", [15, 50])
def test_noise_free_pull_from_any_start(sigma0, n_bins):
    m = noise_free('rayleigh', default_grid('rayleigh', sigma0, n_bins), sigma0)
    for start in np.linspace(0.1 * sigma0, 2.5 * sigma0, 20):
        result = estimate(m, 'rayleigh', start)
        assert result.converged
        assert abs(result.xi_final.sigma - sigma0) < 1e-3, start


@pytest.mark.parametrize("sigma0,start", [(0.5, 0.075), (1.0, 0.15)])
def test_small_start_does_not_jump_past_the_truth(sigma0, start):
    m = noise_free('rayleigh', default_grid('rayleigh', sigma0, 15), sigma0)
    result = estimate(m, 'rayleigh', start)
    assert result.termination is Termination.GRADIENT_TOL
    assert abs(result.xi_final.sigma - sigma0) < 1e-3
    sigmas = [entry.xi.sigma for entry in result.trace]
    assert all(b <= 2.0 * a for a, b in zip(sigmas, sigmas[1:]))
    assert max(sigmas) < 2.0 * sigma0


def test_step_length_does_not_depend_on_units():
    small = noise_free('rayleigh', default_grid('rayleigh', 1.0, 15), 1.0)
    large = noise_free('rayleigh', default_grid('rayleigh', 10.0, 15), 10.0)
    for start in (0.3, 1.8):
        a = step(small, 'rayleigh', start)
        b = step(large, 'rayleigh', 10.0 * start)
        assert a.accepted and b.accepted
        assert b.update[0] == pytest.approx(10.0 * a.update[0], rel=1e-9)


def test_lyapunov_trace_is_strictly_decreasing():
    rng = np.random.default_rng(77)
    for _ in range(50):
        record = sample('rayleigh', 1.0, int(rng.integers(20, 300)), seed=int(rng.integers(2 ** 32)))
        m = measure(record, 'rayleigh', GridPolicy(n_bins=15))
        result = estimate(m, 'rayleigh', rng.uniform(0.3, 3.0))
        values = [entry.value for entry in result.trace]
        assert all(b < a for a, b in zip(values, values[1:]))


def test_gradient_tolerance_wins_a_tie_with_the_iteration_limit(rayleigh_grid):
    m = noise_free('rayleigh', rayleigh_grid, 1.0)
    result = estimate(m, 'rayleigh', 1.0, SolverConfig(max_iters=1))
    assert result.termination is Termination.GRADIENT_TOL
    assert result.iterations == 0


def test_iteration_limit(rayleigh_grid):
    m = noise_free('rayleigh', rayleigh_grid, 1.0)
    result = estimate(m, 'rayleigh', 2.5, SolverConfig(max_iters=1))
    assert result.termination is Termination.MAX_ITERS
    assert not result.converged
    assert result.iterations == 1


def test_default_start_comes_from_the_histogram(rayleigh_grid):
    m = noise_free('rayleigh', rayleigh_grid, 1.0)
    assert abs(estimate(m, 'rayleigh').xi_final.sigma - 1.0) < 1e-3


def test_estimate_errors(rayleigh_grid):
    zero = MeasurementVector(grid=rayleigh_grid, values=np.zeros(15), record_size=10)
    with pytest.raises(DegenerateMeasurementError):
        estimate(zero, 'rayleigh', 1.0)
    m = noise_free('rayleigh', rayleigh_grid, 1.0)
    with pytest.raises(InvalidParameterError):
        estimate(m, 'rayleigh', 1e-7)
    with pytest.raises(InvalidParameterError):
        estimate(m, 'rayleigh', (1.0, 2.0))
    with pytest.raises(ConfigurationError):
        SolverConfig(grad_tol=0.0)
    with pytest.raises(ConfigurationError):
        SolverConfig(max_iters=0)
    with pytest.raises(ConfigurationError):
        SolverConfig(armijo=1.0)
    with pytest.raises(ConfigurationError):
        SolverConfig(max_relative_step=0.0)


def test_noise_free_lognormal_converges_in_both_parameters():
    grid = SampleGrid.from_edges(np.linspace(0.0, 30.0, 61))
    m = noise_free('lognormal', grid, (1.0, 2.0))
    result = estimate(m, 'lognormal', (0.5, 1.0))
    assert result.converged
    np.testing.assert_allclose(result.xi_final.as_array(), [1.0, 2.0], atol=1e-3)


def test_noise_free_normal_converges():
    m = noise_free('normal', default_grid('normal', 1.0, 15), 1.0)
    assert abs(estimate(m, 'normal', 2.0).xi_final.sigma - 1.0) < 1e-3


def test_decompose_tangent_error(rayleigh_grid):
    jac = jacobian('lognormal', rayleigh_grid, (0.6, 0.3))
    e = jac @ np.array([0.4, -1.1])
    parts = decompose_error(e, 'lognormal', rayleigh_grid, (0.6, 0.3))
    assert np.max(np.abs(parts.normal)) <= 1e-10


def test_decompose_orthogonal_error(rayleigh_grid):
    jac = jacobian('rayleigh', rayleigh_grid, 1.0)
    e = _orthogonal_to_jacobian(jac, np.random.default_rng(2), scale=1.0)
    parts = decompose_error(e, 'rayleigh', rayleigh_grid, 1.0)
    assert np.max(np.abs(parts.tangent)) <= 1e-10


def test_decompose_random_error(rayleigh_grid):
    e = np.random.default_rng(3).standard_normal(15)
    parts = decompose_error(e, 'lognormal', rayleigh_grid, (0.6, 0.3))
    np.testing.assert_allclose(parts.tangent + parts.normal, e, atol=1e-10)
    assert abs(parts.tangent @ parts.normal) <= 1e-10 * np.linalg.norm(parts.tangent) * np.linalg.norm(parts.normal) + 1e-14
    jac = jacobian('lognormal', rayleigh_grid, (0.6, 0.3))
    np.testing.assert_allclose(jac.T @ parts.normal, 0.0, atol=1e-8)


def test_decompose_rank_deficient():
    grid = SampleGrid(points=[1.5], widths=[1.0])
    with pytest.raises(RankDeficiencyError):
        decompose_error([0.1], 'lognormal', grid, (1.0, 0.0))
    with pytest.raises(InvalidParameterError):
        decompose_error([0.1, 0.2], 'rayleigh', grid, 1.0)


def test_equilibrium_residual_signs():
    assert abs(equilibrium_residual(1.0, 1.0)) < 1e-8
    assert equilibrium_residual(0.5, 1.0) > 0.0 > equilibrium_residual(2.0, 1.0)
    assert equilibrium_residual(3.0, 4.0) > 0.0 > equilibrium_residual(5.0, 4.0)
    with pytest.raises(InvalidParameterError):
        equilibrium_residual(0.0, 1.0)
    with pytest.raises(ConfigurationError):
        equilibrium_residual(1.0, 1.0, quad_points=10)
