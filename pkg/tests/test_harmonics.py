import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import sph_harm_y

from funklib.harmonics import (
    HarmonicSpectrum,
    analyze,
    evaluate,
    funk_multiplier,
    legendre_p0,
    legendre_poly,
    lm_index,
    n_coeffs,
    parity_split,
    random_spectrum,
    synthesize,
    ylm,
)
from funklib.sphere import SphereGrid, random_unit_vectors


def real_ylm_reference(l, m, points):
    """Real harmonics built from scipy's complex ones with the Condon-Shortley phase removed."""
    p = points / np.linalg.norm(points, axis=-1, keepdims=True)
    theta = np.arccos(np.clip(p[:, 2], -1, 1))
    phi = np.arctan2(p[:, 1], p[:, 0])
    Y = sph_harm_y(l, abs(m), theta, phi) * (-1) ** abs(m)
    if m == 0:
        return Y.real
    return math.sqrt(2) * (Y.real if m > 0 else Y.imag)


def test_index_layout():
    assert n_coeffs(3) == 16
    assert lm_index(0, 0) == 0
    assert lm_index(2, -2) == 4
    assert lm_index(2, 2) == 8
    with pytest.raises(ValueError):
        lm_index(2, 3)


@pytest.mark.parametrize("l,m", [(0, 0), (1, -1), (1, 1), (3, 2), (7, -5), (12, 0), (20, 19)])
def test_ylm_matches_scipy_reference(l, m):
    pts = random_unit_vectors(np.random.default_rng(l * 31 + m), 40)
    np.testing.assert_allclose(ylm(l, m, pts), real_ylm_reference(l, m, pts), atol=1e-12)


def test_ylm_at_poles_is_finite_and_zonal_only():
    north = np.array([[0.0, 0.0, 1.0]])
    assert ylm(4, 0, north)[0] == pytest.approx(math.sqrt(9 / (4 * math.pi)))
    assert ylm(4, 3, north)[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n_lat", [8, 24])
def test_orthonormality_on_grid(n_lat):
    g = SphereGrid(n_lat)
    L = n_lat - 1
    Y = np.stack([ylm(l, m, g.nodes) for l in range(0, L + 1, 3) for m in (-l, 0, l)])
    gram = (Y * g.weights) @ Y.T
    idx = [(l, m) for l in range(0, L + 1, 3) for m in (-l, 0, l)]
    expected = np.array([[1.0 if a == b else 0.0 for b in idx] for a in idx])
    np.testing.assert_allclose(gram, expected, atol=1e-12)


@given(st.integers(0, 15), st.integers(0, 2**32 - 1))
def test_analyze_synthesize_round_trip(L, seed):
    s = random_spectrum(np.random.default_rng(seed), L)
    back = analyze(synthesize(s, SphereGrid(16)), L)
    np.testing.assert_allclose(back.coeffs, s.coeffs, atol=1e-12)


def test_analyze_rejects_bandlimit_above_grid():
    with pytest.raises(ValueError):
        analyze(synthesize(HarmonicSpectrum.zeros(2), SphereGrid(4)), 4)


def test_evaluate_off_grid_matches_reference_sum():
    rng = np.random.default_rng(3)
    s = random_spectrum(rng, 10)
    pts = rng.normal(size=(30, 3))
    ref = sum(s[(l, m)] * real_ylm_reference(l, m, pts) for l in range(11) for m in range(-l, l + 1))
    np.testing.assert_allclose(evaluate(s, pts), ref, atol=1e-12)


def test_evaluate_preserves_leading_shape():
    s = HarmonicSpectrum.from_terms({(2, 1): 1.0})
    pts = random_unit_vectors(np.random.default_rng(0), 12).reshape(3, 4, 3)
    assert evaluate(s, pts).shape == (3, 4)


@pytest.mark.parametrize("l", range(0, 21))
def test_legendre_p0_against_binomial_closed_form(l):
    expected = 0.0 if l % 2 else (-1) ** (l // 2) * math.comb(l, l // 2) / 2**l
    assert legendre_p0(l) == pytest.approx(expected, abs=1e-15)
    assert funk_multiplier(l) == pytest.approx(2 * math.pi * expected, abs=1e-14)


def test_legendre_poly_matches_numpy():
    x = np.linspace(-1, 1, 11)
    for l in range(8):
        np.testing.assert_allclose(legendre_poly(l, x), np.polynomial.legendre.legval(x, [0] * l + [1]), atol=1e-14)


def test_spectrum_algebra_and_trimming():
    a = HarmonicSpectrum.from_terms({(0, 0): 1.0, (3, -1): 2.0})
    b = HarmonicSpectrum.from_terms({(5, 5): 1e-20}, L=6)
    c = a + b
    assert c.L == 6
    assert c.effective_bandlimit() == 3
    assert c.trimmed().L == 3
    assert (a * 2.0)[(3, -1)] == 4.0
    assert a.terms() == [(0, 0, 1.0), (3, -1, 2.0)]
    np.testing.assert_allclose(a.degree_norms(), [1, 0, 0, 2])


def test_trimming_zeroes_round_off_entries():
    s = HarmonicSpectrum.from_terms({(0, 0): 1.0, (1, 1): 1e-17, (2, 0): 1e-3})
    t = s.trimmed()
    assert t[(1, 1)] == 0.0
    assert t[(2, 0)] == 1e-3


def test_parity_split_matches_degree_parity():
    rng = np.random.default_rng(5)
    g = SphereGrid(12)
    even = random_spectrum(rng, 8, "even")
    odd = random_spectrum(rng, 8, "odd")
    e, o = parity_split(synthesize(even + odd, g))
    np.testing.assert_allclose(e.values, synthesize(even, g).values, atol=1e-12)
    np.testing.assert_allclose(o.values, synthesize(odd, g).values, atol=1e-12)


def test_random_spectrum_parity_flag():
    s = random_spectrum(np.random.default_rng(0), 6, "odd")
    assert all(l % 2 == 1 for l, _, _ in s.terms())
    with pytest.raises(ValueError):
        random_spectrum(np.random.default_rng(0), 6, "neither")


@given(st.integers(0, 2**32 - 1))
def test_parseval(seed):
    s = random_spectrum(np.random.default_rng(seed), 11)
    g = SphereGrid(12)
    assert float(np.sum(s.coeffs**2)) == pytest.approx(g.integrate(synthesize(s, g).values ** 2), rel=1e-9)


def test_parity_split_analysis_has_single_parity():
    g = SphereGrid(12)
    e, o = parity_split(synthesize(random_spectrum(np.random.default_rng(9), 11), g))
    from funklib.harmonics import degrees

    d = degrees(11)
    assert np.max(np.abs(analyze(e).coeffs[d % 2 == 1])) <= 1e-10
    assert np.max(np.abs(analyze(o).coeffs[d % 2 == 0])) <= 1e-10
