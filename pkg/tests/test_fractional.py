import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from funklib.fractional import (
    RadialProfile,
    fd_derivative,
    power_derivative,
    power_integral,
    rl_derivative,
    rl_integral,
    rl_weights,
    uniform_nodes,
)

orders = st.floats(0.1, 2.5)
exponents = st.floats(-0.9, 2.0)


def rl_by_quad(f, alpha, t):
    """Adaptive quadrature with the algebraic end weight handled by QUADPACK."""
    val, _ = quad(f, 0, t, weight="alg", wvar=(0.0, alpha - 1.0), limit=200)
    return val / math.gamma(alpha)


def test_profile_validation():
    t = uniform_nodes(8)
    RadialProfile(t, np.ones(8))
    with pytest.raises(ValueError):
        RadialProfile(t[1:], np.ones(7))
    with pytest.raises(ValueError):
        RadialProfile(t, np.ones(7))
    with pytest.raises(ValueError):
        RadialProfile(2 * t, np.ones(8))
    with pytest.raises(ValueError):
        RadialProfile(t, np.ones(8), left_endpoint_exponent=-1.0)


@pytest.mark.parametrize("alpha,beta", [(0.5, 0.0), (0.5, -0.5), (1.5, 2.0), (0.3, 1.7)])
def test_power_closed_forms_against_quadrature(alpha, beta):
    for t in (0.3, 1.0):
        assert power_integral(alpha, beta, t) == pytest.approx(rl_by_quad(lambda s: s**beta, alpha, t), rel=1e-9)


@given(orders, exponents)
def test_integral_exact_for_pure_powers(alpha, gamma):
    psi = RadialProfile.from_function(lambda t: t**gamma, 32, 0.8, gamma)
    out = rl_integral(psi, alpha)
    np.testing.assert_allclose(out.values, power_integral(alpha, gamma, psi.t_nodes), rtol=1e-10, atol=1e-13)
    assert out.left_endpoint_exponent == pytest.approx(gamma + alpha)


@given(orders, exponents, st.floats(-2, 2))
def test_integral_exact_for_linear_times_power_with_left_limit(alpha, gamma, slope):
    psi = RadialProfile.from_function(lambda t: t**gamma * (1 + slope * t), 32, 1.0, gamma, 1.0)
    expected = power_integral(alpha, gamma, psi.t_nodes) + slope * power_integral(alpha, gamma + 1, psi.t_nodes)
    np.testing.assert_allclose(rl_integral(psi, alpha).values, expected, rtol=1e-9, atol=1e-12)


def test_half_integral_of_one():
    one = RadialProfile.from_function(np.ones_like, 512, 1.0, 0.0, 1.0)
    out = rl_integral(one, 0.5)
    np.testing.assert_allclose(out.values, 2 * np.sqrt(out.t_nodes / math.pi), atol=1e-13)
    assert out.left_limit == pytest.approx(2 / math.sqrt(math.pi))


def test_integral_second_order_on_smooth_profile():
    f = lambda t: np.exp(-t) * t**-0.5  # noqa: E731
    ref = rl_by_quad(lambda s: np.exp(-s) * s**-0.5, 0.5, 1.0)
    errs = []
    for N in (32, 64, 128):
        psi = RadialProfile.from_function(f, N, 1.0, -0.5, 1.0)
        errs.append(abs(rl_integral(psi, 0.5).values[-1] - ref))
    assert errs[-1] < 1e-5
    assert math.log2(errs[0] / errs[1]) > 1.8
    assert math.log2(errs[1] / errs[2]) > 1.8


def test_weights_positive():
    t = uniform_nodes(64, 0.5)
    W, w_left, w_hold = rl_weights(t, 0.5, -0.5)
    lower = np.tril(np.ones_like(W, dtype=bool))
    assert np.all(W[lower] > 0) and np.all(W[~lower] == 0)
    assert np.all(w_left > 0) and np.all(w_hold > 0)


@pytest.mark.parametrize("alpha,gamma", [(0.5, -0.5), (0.5, 0.5), (1.3, 0.2)])
def test_weights_scale_with_spacing(alpha, gamma):
    # weights on nodes k h are h^(alpha + gamma) times those on nodes k
    a = rl_weights(uniform_nodes(16, 16.0), alpha, gamma)[0]
    b = rl_weights(uniform_nodes(16, 0.25), alpha, gamma)[0]
    np.testing.assert_allclose(b, (0.25 / 16) ** (alpha + gamma) * a, rtol=1e-12)


def test_fd_derivative_fourth_order():
    errs = []
    for n in (64, 128):
        t = uniform_nodes(n)
        d = fd_derivative(np.sin(3 * t), t[0], 0.0)
        errs.append(np.max(np.abs(d - 3 * np.cos(3 * t))))
    assert errs[1] < 1e-6
    assert math.log2(errs[0] / errs[1]) > 3.7
    with pytest.raises(ValueError):
        fd_derivative(np.ones(3), 0.1)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_half_derivative_of_powers(beta):
    psi = RadialProfile.from_function(lambda t: t**beta, 512, 1.0, beta)
    out = rl_derivative(psi, 0.5)
    interior = slice(10, -1)
    np.testing.assert_allclose(
        out.values[interior], power_derivative(0.5, beta, psi.t_nodes)[interior], rtol=1e-4
    )


def test_derivative_inverts_integral():
    psi = RadialProfile.from_function(lambda t: np.cos(2 * t) + t**2, 512, 1.0, 0.0, 1.0)
    back = rl_derivative(rl_integral(psi, 0.5), 0.5)
    t = psi.t_nodes
    interior = (t >= 0.05) & (t <= 0.95)
    assert np.max(np.abs(back.values - psi.values)[interior]) < 1e-4


def test_order_validation():
    psi = RadialProfile.from_function(np.ones_like, 8, 1.0, 0.0)
    with pytest.raises(ValueError):
        rl_integral(psi, 0.0)
    with pytest.raises(ValueError):
        rl_derivative(psi, 1.0)


def test_round_trip_second_order_under_halving():
    f = lambda t: np.exp(t) * np.cos(t)  # noqa: E731
    errs = []
    for N in (64, 128, 256):
        psi = RadialProfile.from_function(f, N, 1.0, 0.0, 1.0)
        back = rl_derivative(rl_integral(psi, 0.5), 0.5)
        t = psi.t_nodes
        interior = (t >= 0.25) & (t <= 0.75)
        errs.append(np.max(np.abs(back.values - psi.values)[interior]))
    assert math.log2(errs[0] / errs[1]) >= 1.9
    assert math.log2(errs[1] / errs[2]) >= 1.9


def test_semigroup_half_plus_half_is_antiderivative():
    psi = RadialProfile.from_function(lambda t: 1 - 3 * t, 512, 1.0, 0.0, 1.0)
    twice = rl_integral(rl_integral(psi, 0.5), 0.5)
    t = psi.t_nodes
    np.testing.assert_allclose(twice.values, t - 1.5 * t**2, atol=1e-6)


def test_semigroup_quadratic_converges_at_second_order():
    # linear interpolation leaves an O(h^2 |psi''|) gap for higher degrees
    errs = []
    for N in (256, 512, 1024):
        psi = RadialProfile.from_function(lambda t: 1 + 2 * t - 3 * t**2, N, 1.0, 0.0, 1.0)
        t = psi.t_nodes
        twice = rl_integral(rl_integral(psi, 0.5), 0.5)
        errs.append(np.max(np.abs(twice.values - (t + t**2 - t**3))))
    assert math.log2(errs[0] / errs[1]) >= 1.9 and math.log2(errs[1] / errs[2]) >= 1.9
    assert errs[2] <= 1e-6


@given(st.lists(st.floats(0, 10), min_size=8, max_size=8), orders)
def test_integral_preserves_nonnegativity(values, alpha):
    psi = RadialProfile(uniform_nodes(8), np.array(values), -0.5)
    assert np.all(rl_integral(psi, alpha).values >= 0)
