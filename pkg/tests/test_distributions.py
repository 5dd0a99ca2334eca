import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import simpson

from subspacepdf.distributions import (
    ParamVector,
    SampleGrid,
    check_params,
    jacobian,
    model_vector,
    pdf_gradient,
    pdf_value,
    sample,
)
from subspacepdf.errors import ConfigurationError, InvalidParameterError
from subspacepdf.models import ModelKind, get_model


def test_pdf_value_examples():
    assert pdf_value('rayleigh', 0.0, 1.0) == 0.0
    assert pdf_value('rayleigh', 1.0, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-12)
    assert pdf_value('normal', 0.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-12)
    assert pdf_value('lognormal', 1.0, (1.0, 0.0)) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-12)


def test_pdf_is_zero_outside_support():
    assert pdf_value('rayleigh', -1.0, 1.0) == 0.0
    assert pdf_value('lognormal', 0.0, (1.0, 0.0)) == 0.0
    assert pdf_value('lognormal', -2.0, (1.0, 0.0)) == 0.0
    assert pdf_value('normal', -1.0, 1.0) == pytest.approx(pdf_value('normal', 1.0, 1.0))


@pytest.mark.parametrize("sigma", [0.3, 1.0, 4.0])
def test_rayleigh_gradient_vanishes_at_sqrt2_sigma(sigma):
    assert pdf_gradient('rayleigh', math.sqrt(2.0) * sigma, sigma)[0] == pytest.approx(0.0, abs=1e-12)


def test_pdf_gradient_examples():
    assert pdf_gradient('rayleigh', 0.0, 1.0)[0] == 0.0
    assert pdf_gradient('rayleigh', 1.0, 1.0)[0] == pytest.approx(-math.exp(-0.5), rel=1e-12)
    assert pdf_gradient('lognormal', 3.0, (0.7, 1.0)).shape == (2,)


def test_model_vector_matches_scalar_evaluation():
    grid = SampleGrid(points=[1.0], widths=[1.0])
    np.testing.assert_allclose(model_vector('rayleigh', grid, 1.0), [math.exp(-0.5)], rtol=1e-12)

    grid = SampleGrid(points=[1.0, math.e ** 2], widths=[0.1, 0.1])
    expected = stats.lognorm(s=1.0, scale=math.exp(2.0)).pdf(grid.points)
    np.testing.assert_allclose(model_vector('lognormal', grid, (1.0, 2.0)), expected, rtol=1e-12)


def test_model_vector_is_deterministic(rayleigh_grid):
    a = model_vector('rayleigh', rayleigh_grid, 1.3)
    b = model_vector('rayleigh', rayleigh_grid, 1.3)
    assert np.array_equal(a, b)


def test_jacobian_shapes(rayleigh_grid):
    assert jacobian('rayleigh', rayleigh_grid, 1.0).shape == (15, 1)
    assert jacobian('lognormal', rayleigh_grid, (1.0, 0.5)).shape == (15, 2)
    single = SampleGrid(points=[math.sqrt(2.0)], widths=[1.0])
    assert jacobian('rayleigh', single, 1.0)[0, 0] == pytest.approx(0.0, abs=1e-12)


def _random_case(rng, kind):
    sigma = rng.uniform(0.3, 4.0)
    if kind is ModelKind.RAYLEIGH:
        return np.array([sigma]), rng.uniform(0.1, 4.0) * sigma
    if kind is ModelKind.NORMAL_ZERO_MEAN:
        return np.array([sigma]), rng.uniform(-4.0, 4.0) * sigma
    sigma = rng.uniform(0.3, 1.5)
    mu = rng.uniform(-1.0, 2.0)
    return np.array([sigma, mu]), math.exp(mu + rng.uniform(-2.0, 2.0) * sigma)


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(20240501)
    kinds = list(ModelKind)
    for case in range(100):
        kind = kinds[case % len(kinds)]
        xi, x = _random_case(rng, kind)
        analytic = pdf_gradient(kind, x, xi)
        for j in range(len(xi)):
            h = 1e-5 * xi[0]
            up, down = xi.copy(), xi.copy()
            up[j] += h
            down[j] -= h
            numeric = (pdf_value(kind, x, up) - pdf_value(kind, x, down)) / (2.0 * h)
            assert abs(analytic[j] - numeric) <= 1e-6 * abs(analytic[j]) + 1e-9, (kind, xi, x, j)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 4.0])
def test_rayleigh_and_normal_integrate_to_one(sigma):
    x = np.linspace(0.0, 12.0 * sigma, 4001)
    assert simpson(get_model('rayleigh').pdf(x, np.array([sigma])), x=x) == pytest.approx(1.0, abs=1e-4)
    x = np.linspace(-12.0 * sigma, 12.0 * sigma, 4001)
    assert simpson(get_model('normal').pdf(x, np.array([sigma])), x=x) == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("sigma,mu", [(0.25, 0.0), (1.0, 2.0), (1.5, -1.0)])
def test_lognormal_integrates_to_one(sigma, mu):
    # substitute x = e^u so the heavy right tail is covered
    u = np.linspace(mu - 12.0 * sigma, mu + 12.0 * sigma, 4001)
    x = np.exp(u)
    integrand = get_model('lognormal').pdf(x, np.array([sigma, mu])) * x
    assert simpson(integrand, x=u) == pytest.approx(1.0, abs=1e-4)


def test_sample_is_reproducible_and_seed_dependent():
    a = sample('rayleigh', 1.0, 50, seed=11)
    b = sample('rayleigh', 1.0, 50, seed=11)
    c = sample('rayleigh', 1.0, 50, seed=12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("count", [0, -3, 1.7, 2.5, True])
def test_sample_rejects_bad_counts(count):
    with pytest.raises(InvalidParameterError):
        sample('rayleigh', 1.0, count, seed=0)


def test_sample_accepts_integral_counts():
    assert sample('rayleigh', 1.0, 3.0, seed=0).shape == (3,)
    assert sample('rayleigh', 1.0, np.int64(4), seed=0).shape == (4,)


def test_rayleigh_second_moment():
    draws = sample('rayleigh', 1.0, 1_000_000, seed=3)
    assert np.all(draws >= 0.0)
    assert np.mean(draws * draws) == pytest.approx(2.0, rel=0.01)


def test_lognormal_and_normal_samples():
    logs = np.log(sample('lognormal', (0.5, 1.0), 100_000, seed=5))
    assert np.mean(logs) == pytest.approx(1.0, abs=0.01)
    assert np.std(logs) == pytest.approx(0.5, abs=0.01)
    assert np.std(sample('normal', 2.0, 100_000, seed=5)) == pytest.approx(2.0, rel=0.02)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, ()])
def test_param_vector_rejects_invalid_sigma(bad):
    with pytest.raises(InvalidParameterError):
        ParamVector(bad)


def test_param_vector_basics():
    pv = ParamVector((1.0, -2.0))
    assert pv.sigma == 1.0
    assert list(pv) == [1.0, -2.0]
    assert pv.as_array().dtype == float
    with pytest.raises(InvalidParameterError):
        check_params('rayleigh', pv)
    with pytest.raises(InvalidParameterError):
        pdf_value('lognormal', 1.0, 1.0)


def test_invalid_parameter_error_is_a_value_error():
    with pytest.raises(ValueError):
        pdf_value('rayleigh', 1.0, -1.0)


def test_unknown_model():
    with pytest.raises(ConfigurationError):
        get_model('weibull')


def test_sample_grid_validation():
    grid = SampleGrid.from_edges([0.0, 0.5, 1.0])
    np.testing.assert_allclose(grid.points, [0.25, 0.75])
    np.testing.assert_allclose(grid.widths, [0.5, 0.5])
    assert grid.size == 2
    with pytest.raises(InvalidParameterError):
        SampleGrid(points=[1.0, 0.5], widths=[0.1, 0.1])
    with pytest.raises(InvalidParameterError):
        SampleGrid(points=[1.0], widths=[0.0])
    with pytest.raises(InvalidParameterError):
        SampleGrid(points=[1.0, 2.0], widths=[1.0])
    with pytest.raises(ValueError):
        grid.points[0] = 3.0
