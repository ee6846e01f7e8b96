"""Great-circle (Minkowski--Funk) transform, its dual, shifted variants,
spherical means and the cosine transform.

Functions on the set of great circles are stored as grid functions of the
pole. Values off the grid come from harmonic synthesis of the grid
analysis, so every operator here is spectrally consistent with
:mod:`funklib.harmonics`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .errors import PreconditionError
from .harmonics import (
    HarmonicSpectrum,
    analyze,
    evaluate,
    legendre_poly,
    synthesize,
)
from .sphere import (
    E3,
    GreatCircle,
    GridFunction,
    SphereGrid,
    as_points,
    unit,
    circle_points,
    north_frames,
)

DEFAULT_ORBIT_NODES = 256
EVEN_TOL = 1e-10
DUAL_ODD_TOL = 1e-8


def _spectrum(f, L: int | None = None) -> HarmonicSpectrum:
    if isinstance(f, HarmonicSpectrum):
        return f.trimmed()
    if isinstance(f, CircleFunction):
        f = f.fn
    return analyze(f, L).trimmed()


def _circle_count(s: HarmonicSpectrum, m: int | None) -> int:
    # trapezoid is exact for trigonometric polynomials of degree < m
    return max(16, 2 * s.L + 2) if m is None else int(m)


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """A function of great circles, sampled at the grid nodes read as poles."""

    fn: GridFunction

    @property
    def grid(self) -> SphereGrid:
        return self.fn.grid

    @property
    def values(self) -> np.ndarray:
        return self.fn.values

    def asymmetry(self) -> float:
        """``max |phi(p) - phi(-p)|`` over the grid."""
        return float(np.max(np.abs(self.fn.values - self.fn.antipodal().values)))

    @property
    def even(self) -> bool:
        scale = max(1.0, self.fn.max_abs())
        return self.asymmetry() <= EVEN_TOL * scale

    def __call__(self, circle: GreatCircle) -> float:
        return float(evaluate(_spectrum(self), circle.pole.as_array()))


def _require_even(phi: CircleFunction, tol: float = DUAL_ODD_TOL) -> None:
    odd = 0.5 * phi.asymmetry()
    if odd > tol * max(1.0, phi.fn.max_abs()):
        raise PreconditionError(
            f"functions on great circles must be antipodally even; odd part is {odd:.3e}"
        )


def great_circle_integral(s: HarmonicSpectrum, poles, m: int | None = None) -> np.ndarray:
    """``∫_{pole^⊥} f ds`` (total measure 2 pi) for an array of poles."""
    m = _circle_count(s, m)
    pts = circle_points(unit(poles), 0.0, m)
    return evaluate(s, pts).sum(axis=-1) * (2.0 * math.pi / m)


def funk(f: GridFunction, m_circle: int | None = None, L: int | None = None) -> CircleFunction:
    """Integral of ``f`` over the great circle of every grid pole.

    ``m_circle`` defaults to ``2 L_eff + 2`` nodes, where ``L_eff`` is the
    effective bandlimit of ``f``; that makes the trapezoid rule exact.
    """
    s = _spectrum(f, L)
    vals = great_circle_integral(s, f.grid.nodes, m_circle)
    return CircleFunction(GridFunction(f.grid, vals))


def funk_at(f, poles, m_circle: int | None = None) -> np.ndarray:
    """The transform evaluated at arbitrary poles."""
    return great_circle_integral(_spectrum(f), poles, m_circle)


def _orbit_angles(m: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(m) / m


def _frame(x, frame) -> np.ndarray:
    x = unit(x)
    if frame is None:
        return north_frames(x)
    r = np.asarray(getattr(frame, "matrix", frame), dtype=float)
    if np.max(np.abs(r[:, 2] - x)) > 1e-12:
        raise ValueError("frame must map e_3 to the base point")
    return r


def _shifted_poles(frames: np.ndarray, theta_ang, m: int) -> np.ndarray:
    """Poles ``r_x rho g^{-1}(theta) e_3`` for every orbit sample rho."""
    th = np.asarray(theta_ang, dtype=float)
    beta = _orbit_angles(m)
    c, s = np.cos(th)[..., None], np.sin(th)[..., None]
    local = np.stack(
        [-c * np.cos(beta), -c * np.sin(beta), np.broadcast_to(s, c.shape[:-1] + (m,))], axis=-1
    )
    return local @ frames.T


def generalized_dual(
    phi: CircleFunction, x, theta_ang, m: int = DEFAULT_ORBIT_NODES, frame=None
):
    """Average of ``phi`` over the great circles at distance ``theta_ang`` from ``x``.

    Realized as the orbit average ``∫_K phi(r_x rho g^{-1}(theta) xi_o) d rho``.
    ``theta_ang`` may be an array; ``frame`` overrides the choice of ``r_x``.
    """
    _require_even(phi)
    s = _spectrum(phi)
    poles = _shifted_poles(_frame(x, frame), theta_ang, m)
    out = evaluate(s, poles).mean(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def dual_funk(phi: CircleFunction, m: int | None = None) -> GridFunction:
    """Average of ``phi`` over all great circles through each grid node."""
    _require_even(phi)
    s = _spectrum(phi)
    m = _circle_count(s, m)
    frames = north_frames(phi.grid.nodes)
    poles = np.einsum("jk,nik->nji", _shifted_poles(np.eye(3), 0.0, m), frames)
    return GridFunction(phi.grid, evaluate(s, poles).mean(axis=-1))


def spherical_mean(f, theta, t, m: int = DEFAULT_ORBIT_NODES):
    """Average of ``f`` over the circle ``{s : s . theta = t}``; ``t`` may be an array."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) >= 1.0):
        raise ValueError("spherical mean needs |t| < 1")
    s = _spectrum(f)
    th = unit(theta).reshape(3)
    pts = circle_points(np.broadcast_to(th, t_arr.shape + (3,)), t_arr, m)
    out = evaluate(s, pts).mean(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def spherical_mean_grid(f: GridFunction, t: float, m: int = DEFAULT_ORBIT_NODES) -> GridFunction:
    """``(M^t f)(theta)`` for every grid node ``theta``."""
    if not abs(t) < 1.0:
        raise ValueError("spherical mean needs |t| < 1")
    s = _spectrum(f)
    pts = circle_points(f.grid.nodes, t, m)
    return GridFunction(f.grid, evaluate(s, pts).mean(axis=-1))


def generalized_funk_grid(f: GridFunction, theta_ang: float, m: int = DEFAULT_ORBIT_NODES) -> GridFunction:
    """Shifted transform at every grid pole, each read as a canonical-sign great circle."""
    s = _spectrum(f)
    poles = np.array([GreatCircle(p).pole.as_array() for p in f.grid.nodes])
    pts = circle_points(poles, math.sin(theta_ang), m)
    return GridFunction(f.grid, evaluate(s, pts).mean(axis=-1))


def generalized_funk(f, xi: GreatCircle, theta_ang, m: int = DEFAULT_ORBIT_NODES, frame=None):
    """Average of ``f`` over the circle at distance ``theta_ang`` from ``xi``.

    Orbit form ``∫_K f(r_xi rho x_theta) d rho`` with
    ``x_theta = e_1 cos(theta) + e_3 sin(theta)``; the circle lies on the side
    of the canonical pole of ``xi``.
    """
    s = _spectrum(f)
    r = _frame(xi.pole.as_array(), frame)
    th = np.asarray(theta_ang, dtype=float)
    beta = _orbit_angles(m)
    c, sn = np.cos(th)[..., None], np.sin(th)[..., None]
    local = np.stack(
        [c * np.cos(beta), c * np.sin(beta), np.broadcast_to(sn, c.shape[:-1] + (m,))], axis=-1
    )
    out = evaluate(s, local @ r.T).mean(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def k_average_identity_check(F, z, m: int = DEFAULT_ORBIT_NODES) -> tuple[float, float]:
    """Both sides of ``∫_K F(rho z) d rho = (M^{z_3} F)(e_3)``.

    The left side averages over the orbit of ``z`` under rotations about e_3;
    the right side is the spherical mean on the latitude circle ``s_3 = z_3``.
    """
    z = unit(z).reshape(3)
    s = _spectrum(F)
    beta = _orbit_angles(m)
    cb, sb = np.cos(beta), np.sin(beta)
    orbit = np.stack([cb * z[0] - sb * z[1], sb * z[0] + cb * z[1], np.full(m, z[2])], axis=-1)
    lhs = float(evaluate(s, orbit).mean())
    rhs = spherical_mean(s, E3, z[2], m)
    return lhs, rhs


def cosine_multipliers(alpha: float, L: int, n_nodes: int | None = None) -> np.ndarray:
    """Eigenvalues ``2 pi ∫_{-1}^{1} |t|^{alpha-1} P_l(t) dt`` for ``l <= L``.

    Gauss--Jacobi on ``[0, 1]`` absorbs the weight ``t^{alpha-1}``; odd
    degrees vanish because the kernel is even.
    """
    check_cosine_order(alpha)
    n = L + 2 if n_nodes is None else n_nodes
    x, w = roots_jacobi(n, 0.0, alpha - 1.0)
    t = 0.5 * (1.0 + x)
    w = w * 2.0 ** (-alpha)
    out = np.zeros(L + 1)
    for l in range(0, L + 1, 2):
        out[l] = 4.0 * math.pi * float(np.dot(w, legendre_poly(l, t)))
    return out


def check_cosine_order(alpha: float) -> None:
    if not alpha > 0:
        raise ValueError(f"cosine transform needs alpha > 0, got {alpha!r}")
    if float(alpha).is_integer() and int(alpha) % 2 == 1:
        raise ValueError(f"alpha must not be an odd positive integer, got {alpha!r}")


def cosine_transform(f: GridFunction, alpha: float, L: int | None = None) -> GridFunction:
    """``∫ f(s) |theta . s|^{alpha-1} ds`` at every grid node, without normalizing constant.

    Applied degree by degree (Funk--Hecke) so the equatorial singularity of
    the kernel for ``alpha < 1`` never meets a 2-D quadrature.
    """
    check_cosine_order(alpha)
    s = analyze(f, L)
    return synthesize(s.degree_scaled(cosine_multipliers(alpha, s.L)), f.grid)


def zonal_harmonic(grid: SphereGrid, l: int) -> GridFunction:
    return synthesize(HarmonicSpectrum.from_terms({(l, 0): 1.0}), grid)


def multiplier_measure(
    operator: str | Callable[[GridFunction], object],
    l: int,
    grid: SphereGrid | None = None,
    alpha: float | None = None,
) -> float:
    """Least-squares ratio ``<A Y_{l,0}, Y_{l,0}> / <Y_{l,0}, Y_{l,0}>`` on the grid.

    ``operator`` is ``"funk"``, ``"cosine"`` (needs ``alpha``) or any callable
    mapping a GridFunction to a GridFunction or CircleFunction.
    """
    if l % 2:
        raise ValueError("multipliers are probed on even degrees only")
    grid = grid or SphereGrid(max(16, l + 2))
    if l > grid.n_lat - 1:
        raise ValueError("degree exceeds grid bandlimit")
    if operator == "funk":
        op = funk
    elif operator == "cosine":
        if alpha is None:
            raise ValueError("cosine operator needs alpha")
        op = lambda g: cosine_transform(g, alpha)  # noqa: E731
    elif callable(operator):
        op = operator
    else:
        raise ValueError(f"unknown operator {operator!r}")
    y = zonal_harmonic(grid, l)
    out = op(y)
    vals = out.values
    return float(np.dot(vals, y.values) / np.dot(y.values, y.values))


def is_constant(f: GridFunction, tol: float = 1e-9) -> bool:
    """True when only the degree-0 coefficient is non-negligible."""
    s = analyze(f)
    return bool(np.all(np.abs(s.coeffs[1:]) <= tol * max(1.0, abs(s.coeffs[0]))))

