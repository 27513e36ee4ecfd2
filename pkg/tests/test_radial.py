import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from becentropy.radial import (
    GridError,
    RadialFunction,
    RadialGrid,
    default_r_max,
    integrate_radial,
    second_derivative,
    simpson_weights,
)


def gaussian_density(grid):
    return RadialFunction(grid, np.pi**-1.5 * np.exp(-grid.nodes**2))


def test_grid_invariants():
    g = RadialGrid(12.0, 2001)
    assert g.nodes[0] == 0.0
    assert g.r_max == 12.0
    np.testing.assert_allclose(np.diff(g.nodes), g.spacing, rtol=1e-12)
    assert np.all(np.diff(g.nodes) > 0)


@pytest.mark.parametrize("r_max, n", [(0.0, 100), (-1.0, 100), (5.0, 63), (5.0, 100.5), (np.inf, 100)])
def test_bad_grid_rejected(r_max, n):
    with pytest.raises(GridError):
        RadialGrid(r_max, n)


def test_default_r_max_scales_with_tf_radius():
    assert default_r_max(None) == 10.0
    assert default_r_max(2.0) == 10.0
    assert default_r_max(50.0) == pytest.approx(30.0)


@pytest.mark.parametrize("n", [65, 101, 2001])
def test_simpson_weights_exact_for_cubics_on_odd_meshes(n):
    x = np.linspace(0.0, 3.0, n)
    w = simpson_weights(n, x[1])
    assert w @ (x**3 - 2 * x + 1) == pytest.approx(3.0**4 / 4 - 9.0 + 3.0, rel=1e-12)


@pytest.mark.parametrize("n", [66, 100, 2000])
def test_simpson_weights_exact_for_quadratics_on_even_meshes(n):
    x = np.linspace(0.0, 3.0, n)
    w = simpson_weights(n, x[1])
    assert w @ (x**2 - 2 * x + 1) == pytest.approx(9.0 - 9.0 + 3.0, rel=1e-12)


def test_normalised_gaussian():
    assert integrate_radial(gaussian_density(RadialGrid(12.0, 2001))) == pytest.approx(1.0, abs=1e-8)


def test_zero_integrand():
    g = RadialGrid(5.0, 101)
    assert integrate_radial(RadialFunction(g, np.zeros(101))) == 0.0


def test_gaussian_mean_square_radius():
    g = RadialGrid(12.0, 2001)
    f = gaussian_density(g) * g.nodes**2
    assert integrate_radial(f) == pytest.approx(1.5, abs=1e-8)


@pytest.mark.parametrize(
    "density",
    [
        lambda r: np.pi**-1.5 * np.exp(-r**2),
        lambda r: np.exp(-r) / (8 * np.pi),
    ],
    ids=["gaussian", "exponential"],
)
def test_quadrature_converges_at_least_second_order(density):
    # meshes coarse enough that the error is visible above roundoff
    errors = [
        abs(integrate_radial(RadialFunction(g, density(g.nodes))) - 1.0)
        for g in (RadialGrid(60.0, n) for n in (65, 129, 257))
    ]
    assert errors[0] > 1e-6
    assert errors[1] <= errors[0] / 4
    assert errors[2] <= errors[1] / 4


def test_non_finite_sample_is_named():
    g = RadialGrid(5.0, 101)
    v = np.ones(101)
    v[17] = np.nan
    with pytest.raises(GridError, match="index 17"):
        RadialFunction(g, v)


def test_length_mismatch():
    with pytest.raises(GridError):
        RadialFunction(RadialGrid(5.0, 101), np.ones(100))


def test_second_derivative_quadratic():
    g = RadialGrid(4.0, 101)
    d2 = second_derivative(RadialFunction(g, g.nodes**2)).values
    np.testing.assert_allclose(d2, 2.0, atol=1e-8)


def test_second_derivative_constant():
    g = RadialGrid(4.0, 101)
    np.testing.assert_allclose(second_derivative(RadialFunction(g, np.full(101, 3.0))).values, 0.0, atol=1e-9)


def test_second_derivative_sine_is_order_h2():
    errs = []
    for n in (101, 201, 401):
        g = RadialGrid(2 * np.pi, n)
        d2 = second_derivative(RadialFunction(g, np.sin(g.nodes))).values
        err = np.max(np.abs(d2 + np.sin(g.nodes)))
        assert err < 2.0 * g.spacing**2
        errs.append(err)
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(alpha=finite, beta=finite, seed=st.integers(0, 2**32 - 1))
def test_integration_is_linear(alpha, beta, seed):
    g = RadialGrid(3.0, 129)
    rng = np.random.default_rng(seed)
    f = RadialFunction(g, rng.normal(size=129))
    h = RadialFunction(g, rng.normal(size=129))
    lhs = integrate_radial(alpha * f + beta * h)
    rhs = alpha * integrate_radial(f) + beta * integrate_radial(h)
    scale = abs(alpha) * np.abs(f.values).sum() + abs(beta) * np.abs(h.values).sum() + 1.0
    assert abs(lhs - rhs) <= 1e-12 * scale * 4 * np.pi * 9


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(64, 300))
def test_integration_of_nonnegative_is_nonnegative(seed, n):
    g = RadialGrid(5.0, n)
    f = RadialFunction(g, np.abs(np.random.default_rng(seed).normal(size=n)))
    assert integrate_radial(f) >= 0.0
