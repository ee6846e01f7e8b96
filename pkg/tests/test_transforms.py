import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import eval_legendre

from funklib.errors import PreconditionError
from funklib.harmonics import HarmonicSpectrum, analyze, evaluate, random_spectrum, synthesize
from funklib.sphere import (
    E3,
    GreatCircle,
    GridFunction,
    Rotation,
    SphereGrid,
    UnitVector3,
    north_frames,
    random_unit_vectors,
)
from funklib.transforms import (
    CircleFunction,
    cosine_multipliers,
    cosine_transform,
    dual_funk,
    funk,
    funk_at,
    generalized_dual,
    generalized_funk,
    generalized_funk_grid,
    is_constant,
    k_average_identity_check,
    multiplier_measure,
    spherical_mean,
    spherical_mean_grid,
)

GRID = SphereGrid(16)
seeds = st.integers(0, 2**32 - 1)


def degree_l_spectrum(rng, l):
    c = HarmonicSpectrum.zeros(l).coeffs.copy()
    c[l * l : (l + 1) ** 2] = rng.standard_normal(2 * l + 1)
    return HarmonicSpectrum(l, c)


def brute_circle_integral(s, pole, n=400):
    """Great-circle integral with a basis built by cross products and n equal arcs."""
    p = np.asarray(pole, float) / np.linalg.norm(pole)
    a = np.array([1.0, 0.0, 0.0]) if abs(p[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(p, a)
    u /= np.linalg.norm(u)
    v = np.cross(p, u)
    ang = 2 * np.pi * np.arange(n) / n
    pts = np.cos(ang)[:, None] * u + np.sin(ang)[:, None] * v
    return evaluate(s, pts).sum() * 2 * np.pi / n


@given(seeds)
def test_funk_matches_brute_force_circle_quadrature(seed):
    rng = np.random.default_rng(seed)
    s = random_spectrum(rng, 9)
    poles = random_unit_vectors(rng, 3)
    ref = [brute_circle_integral(s, p) for p in poles]
    np.testing.assert_allclose(funk_at(s, poles), ref, atol=1e-11)


@given(st.integers(0, 12), seeds)
def test_funk_eigenrelation_on_degree_l(l, seed):
    s = degree_l_spectrum(np.random.default_rng(seed), l)
    f = synthesize(s, GRID)
    lam = 2 * math.pi * eval_legendre(l, 0.0)
    np.testing.assert_allclose(funk(f).values, lam * f.values, atol=1e-11)


def test_funk_of_odd_function_vanishes():
    s = random_spectrum(np.random.default_rng(1), 11, "odd")
    assert funk(synthesize(s, GRID)).fn.max_abs() < 1e-12


def test_circle_function_is_even_and_callable():
    f = synthesize(random_spectrum(np.random.default_rng(2), 6), GRID)
    g = funk(f)
    assert g.even
    xi = GreatCircle(UnitVector3(0.3, -0.2, 0.9))
    assert g(xi) == pytest.approx(brute_circle_integral(analyze(f), xi.pole.as_array()), abs=1e-11)


@given(st.integers(0, 6).map(lambda k: 2 * k), seeds)
def test_dual_of_transform_scales_by_p0_squared(l, seed):
    f = synthesize(degree_l_spectrum(np.random.default_rng(seed), l), GRID)
    expected = 2 * math.pi * eval_legendre(l, 0.0) ** 2 * f.values
    np.testing.assert_allclose(dual_funk(funk(f)).values, expected, atol=1e-11)


def test_dual_rejects_odd_circle_function():
    odd = synthesize(HarmonicSpectrum.from_terms({(3, 1): 1.0}), GRID)
    with pytest.raises(PreconditionError):
        dual_funk(CircleFunction(odd))


@given(st.integers(0, 5).map(lambda k: 2 * k), st.floats(0.01, 1.56), seeds)
def test_generalized_dual_funk_hecke(l, theta, seed):
    rng = np.random.default_rng(seed)
    s = degree_l_spectrum(rng, l)
    phi = CircleFunction(synthesize(s, GRID))
    x = random_unit_vectors(rng, 1)[0]
    expected = eval_legendre(l, math.sin(theta)) * evaluate(s, x)
    assert generalized_dual(phi, x, theta, 64) == pytest.approx(float(expected), abs=1e-11)


def test_generalized_dual_at_zero_is_dual():
    phi = funk(synthesize(random_spectrum(np.random.default_rng(4), 6, "even"), GRID))
    x = GRID.nodes[37]
    assert generalized_dual(phi, x, 0.0, 64) == pytest.approx(dual_funk(phi).values[37], abs=1e-12)


def test_generalized_dual_frame_independent():
    phi = funk(synthesize(random_spectrum(np.random.default_rng(5), 8, "even"), GRID))
    x = np.array([0.0, 0.6, 0.8])
    c, s = math.cos(1.1), math.sin(1.1)
    spun = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    frame = north_frames(x) @ spun
    a = generalized_dual(phi, x, 0.7, 64)
    b = generalized_dual(phi, x, 0.7, 64, frame=frame)
    assert a == pytest.approx(b, abs=1e-12)
    with pytest.raises(ValueError):
        generalized_dual(phi, x, 0.7, 64, frame=np.eye(3))


@given(st.integers(0, 10), st.floats(-0.99, 0.99), seeds)
def test_spherical_mean_funk_hecke(l, t, seed):
    rng = np.random.default_rng(seed)
    s = degree_l_spectrum(rng, l)
    x = random_unit_vectors(rng, 1)[0]
    expected = eval_legendre(l, t) * evaluate(s, x)
    assert spherical_mean(s, x, t, 64) == pytest.approx(float(expected), abs=1e-11)


def test_spherical_mean_at_zero_is_normalized_funk():
    f = synthesize(random_spectrum(np.random.default_rng(6), 7), GRID)
    np.testing.assert_allclose(spherical_mean_grid(f, 0.0, 64).values, funk(f).values / (2 * math.pi), atol=1e-12)
    with pytest.raises(ValueError):
        spherical_mean(f, E3, 1.0)


@given(st.integers(0, 8), st.floats(0.0, 1.5), seeds)
def test_generalized_funk_funk_hecke(l, theta, seed):
    rng = np.random.default_rng(seed)
    s = degree_l_spectrum(rng, l)
    xi = GreatCircle(UnitVector3.from_array(random_unit_vectors(rng, 1)[0]))
    expected = eval_legendre(l, math.sin(theta)) * evaluate(s, xi.pole.as_array())
    assert generalized_funk(s, xi, theta, 64) == pytest.approx(float(expected), abs=1e-11)


def test_generalized_funk_grid_uses_canonical_poles():
    s = HarmonicSpectrum.from_terms({(1, 0): 1.0, (2, 1): 0.5})
    f = synthesize(s, GRID)
    out = generalized_funk_grid(f, 0.4, 64)
    for j in (0, 100, 400):
        xi = GreatCircle(UnitVector3.from_array(GRID.nodes[j]))
        assert out.values[j] == pytest.approx(generalized_funk(s, xi, 0.4, 64), abs=1e-12)


@given(seeds)
def test_k_average_identity(seed):
    rng = np.random.default_rng(seed)
    lhs, rhs = k_average_identity_check(random_spectrum(rng, 8), random_unit_vectors(rng, 1)[0], 64)
    assert lhs == pytest.approx(rhs, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.05, 0.5, 1.5, 2.0, 4.5])
def test_cosine_multipliers_against_adaptive_quadrature(alpha):
    c = cosine_multipliers(alpha, 6)
    for l in range(7):
        ref = 0.0
        if l % 2 == 0:
            val, _ = quad(lambda t: t ** (alpha - 1) * eval_legendre(l, t), 0, 1, limit=200)
            ref = 4 * math.pi * val
        assert c[l] == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_cosine_closed_form_low_degrees():
    a = 0.3
    c = cosine_multipliers(a, 2)
    assert c[0] == pytest.approx(4 * math.pi / a)
    assert c[2] == pytest.approx(2 * math.pi * (3 / (a + 2) - 1 / a))


def test_cosine_transform_is_diagonal_and_validates_alpha():
    f = synthesize(HarmonicSpectrum.from_terms({(2, -1): 1.0}), GRID)
    out = cosine_transform(f, 0.5)
    np.testing.assert_allclose(out.values, cosine_multipliers(0.5, 2)[2] * f.values, atol=1e-12)
    for bad in (0.0, -1.0, 1.0, 3.0):
        with pytest.raises(ValueError):
            cosine_transform(f, bad)


def test_multiplier_measure_cases():
    assert multiplier_measure("funk", 4) == pytest.approx(2 * math.pi * 3 / 8)
    assert multiplier_measure(lambda g: g * 3.0, 2) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        multiplier_measure("funk", 3)
    with pytest.raises(ValueError):
        multiplier_measure("cosine", 2)


def test_is_constant():
    assert is_constant(GridFunction.constant(GRID, 2.0))
    assert not is_constant(synthesize(HarmonicSpectrum.from_terms({(0, 0): 1.0, (2, 0): 1e-3}), GRID))


@given(seeds)
def test_funk_rotation_equivariance(seed):
    rng = np.random.default_rng(seed)
    s = random_spectrum(rng, 7)
    axis, angle = rng.standard_normal(3), rng.uniform(0, 2 * np.pi)
    r = Rotation.about_axis(axis, angle)
    rotated = GRID.sample(lambda p: evaluate(s, r.apply(p)))
    poles = random_unit_vectors(rng, 5)
    np.testing.assert_allclose(funk_at(analyze(rotated), poles), funk_at(s, r.apply(poles)), atol=1e-9)


@given(seeds)
def test_funk_output_is_even_for_any_input(seed):
    f = synthesize(random_spectrum(np.random.default_rng(seed), 9), GRID)
    assert funk(f).asymmetry() <= 1e-10


def test_spherical_mean_even_in_tau_for_even_f():
    rng = np.random.default_rng(7)
    s = random_spectrum(rng, 8, "even")
    x = random_unit_vectors(rng, 1)[0]
    tau = np.linspace(0.05, 0.95, 7)
    c = math.cos(0.4)
    np.testing.assert_allclose(spherical_mean(s, x, tau * c, 64), spherical_mean(s, x, -tau * c, 64), atol=1e-10)


@pytest.mark.parametrize("terms,constant", [({(0, 0): 2.0}, True), ({(0, 0): 2.0, (2, 1): 0.3}, False), ({(0, 0): 1.0, (4, -3): 1e-3}, False)])
def test_constant_iff_transform_constant(terms, constant):
    f = synthesize(HarmonicSpectrum.from_terms(terms), GRID)
    assert is_constant(f) == constant
    assert is_constant(funk(f).fn) == constant


def test_odd_part_annihilated_relative_to_size():
    s = random_spectrum(np.random.default_rng(8), 9, "odd", scale=100.0)
    f = synthesize(s, GRID)
    assert funk(f).fn.max_abs() <= 1e-9 * f.max_abs()
