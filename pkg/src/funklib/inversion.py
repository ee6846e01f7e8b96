"""Reconstruction of an even function from its great-circle integrals.

Two independent routes:

* :func:`invert_harmonic` divides every even-degree coefficient by the
  transform's multiplier ``2 pi P_l(0)``;
* :func:`invert_abel` recovers ``f(x)`` pointwise from shifted dual
  transforms through a half-order Riemann--Liouville derivative and an
  extrapolation ``t -> 1``.

:func:`verify_identity` evaluates both sides of the identity tying the two
together: the shifted dual of ``Mf`` against the half-order integral of the
spherical-mean profile ``tau^{-1/2} (M^{sqrt(tau)} f)(x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, RangeConditionError
from .fractional import RadialProfile, rl_derivative, rl_integral, uniform_nodes
from .harmonics import (
    HarmonicSpectrum,
    analyze,
    degrees,
    funk_multiplier,
    parity_split,
    synthesize,
)
from .sphere import GridFunction, UnitVector3, sphere_area, unit
from .transforms import (
    DEFAULT_ORBIT_NODES,
    CircleFunction,
    funk,
    generalized_dual,
    spherical_mean,
)

ODD_RTOL = 1e-6
GUARD_RTOL = 1e-6


def require_even(f: GridFunction, tol: float = 1e-8) -> None:
    _, odd = parity_split(f)
    scale = max(1.0, f.max_abs())
    if odd.max_abs() > tol * scale:
        raise PreconditionError(
            f"function must be antipodally even; odd part has sup norm {odd.max_abs():.3e}"
        )


def identity_rhs(f, x, theta_ang: float, N: int = 512, m: int = DEFAULT_ORBIT_NODES) -> float:
    """``2 sqrt(pi) (I^{1/2} f~_x)(cos^2 theta)`` with ``f~_x(tau) = tau^{-1/2} (M^{sqrt tau} f)(x)``."""
    t_max = math.cos(theta_ang) ** 2
    tau = uniform_nodes(N, t_max)
    means = spherical_mean(f, x, np.sqrt(tau), m)
    profile = RadialProfile(tau, means / np.sqrt(tau), -0.5, spherical_mean(f, x, 0.0, m))
    return 2.0 * math.sqrt(math.pi) * float(rl_integral(profile, 0.5).values[-1])


def verify_identity(
    f: GridFunction,
    x,
    theta_ang,
    N: int = 512,
    m: int = DEFAULT_ORBIT_NODES,
):
    """Both sides of the shifted-dual / fractional-integral identity for even ``f``.

    ``lhs = (M*_theta M f)(x)`` through :func:`funk` and :func:`generalized_dual`;
    ``rhs`` through spherical means and :func:`rl_integral`. ``theta_ang`` may be a
    scalar in ``(0, pi/2)`` or a sequence, in which case arrays are returned.
    """
    require_even(f)
    th = np.atleast_1d(np.asarray(theta_ang, dtype=float))
    if np.any((th <= 0) | (th >= math.pi / 2)):
        raise ValueError("theta must lie in (0, pi/2)")
    x = unit(x).reshape(3)
    Mf = funk(f)
    lhs = np.atleast_1d(generalized_dual(Mf, x, th, m))
    s = analyze(f).trimmed()
    rhs = np.array([identity_rhs(s, x, t, N, m) for t in th])
    if np.ndim(theta_ang) == 0:
        return float(lhs[0]), float(rhs[0])
    return lhs, rhs


def identity_constant_sides(n: int, theta_ang: float, N: int = 64) -> tuple[float, float]:
    """Both sides of the identity for ``f = 1`` on ``S^{n-1}``, with ``n`` symbolic.

    The left side is the area of the (n-2)-sphere (a normalized dual of a
    constant transform); the right side runs the product-integration rule on
    ``tau^{-1/2}`` at order ``(n-2)/2``.
    """
    if n < 3:
        raise ValueError("dimension must be at least 3")
    lhs = sphere_area(n - 1)
    c2 = math.cos(theta_ang) ** 2
    profile = RadialProfile.from_function(lambda t: t**-0.5, N, c2, -0.5, 1.0)
    frac = float(rl_integral(profile, (n - 2) / 2).values[-1])
    rhs = 2.0 * math.pi ** ((n - 2) / 2) * math.cos(theta_ang) ** (3 - n) * frac
    return lhs, rhs


def check_range(s: HarmonicSpectrum, rtol: float = ODD_RTOL) -> None:
    """Reject data with odd-degree content above ``rtol`` of the largest coefficient."""
    scale = max(float(np.max(np.abs(s.coeffs), initial=0.0)), 1e-300)
    d = degrees(s.L)
    bad = sorted({int(l) for l in d[(d % 2 == 1) & (np.abs(s.coeffs) > rtol * scale)]})
    if bad:
        raise RangeConditionError(
            f"data is not in the range of the transform: odd degrees {bad} are non-zero",
            bad,
        )


@dataclass(frozen=True)
class HarmonicInverse:
    spectrum: HarmonicSpectrum
    zeroed_degrees: list[int] = field(default_factory=list)


def harmonic_inverse_spectrum(
    g: CircleFunction,
    L: int | None = None,
    odd_rtol: float = ODD_RTOL,
    guard_rtol: float = GUARD_RTOL,
) -> HarmonicInverse:
    s = analyze(g.fn, L)
    check_range(s, odd_rtol)
    lam = np.array([funk_multiplier(l) for l in range(s.L + 1)])
    small = np.abs(lam) < guard_rtol * 2.0 * math.pi
    zeroed = [l for l in range(0, s.L + 1, 2) if small[l]]
    inv = np.where(small, 0.0, 1.0 / np.where(small, 1.0, lam))
    return HarmonicInverse(s.degree_scaled(inv), zeroed)


def invert_harmonic(
    g: CircleFunction, L: int | None = None, odd_rtol: float = ODD_RTOL
) -> GridFunction:
    """The unique even function whose great-circle transform is ``g``."""
    return synthesize(harmonic_inverse_spectrum(g, L, odd_rtol).spectrum, g.grid)


def richardson(estimates, ratio: float = 2.0) -> np.ndarray:
    """Richardson table for estimates at step sizes ``d, d/r, d/r^2, ...``.

    Assumes an error expansion in integer powers of the step; entry ``[k, j]``
    has the first ``j`` powers eliminated.
    """
    e = np.asarray(estimates, dtype=float)
    n = e.size
    R = np.full((n, n), np.nan)
    R[:, 0] = e
    for j in range(1, n):
        f = ratio**j
        R[j:, j] = (f * R[j:, j - 1] - R[j - 1 : -1, j - 1]) / (f - 1.0)
    return R


@dataclass(frozen=True, eq=False)
class AbelReconstructionReport:
    """Trace of a pointwise reconstruction through the fractional route."""

    point: UnitVector3
    t_nodes: np.ndarray
    lhs_profile: np.ndarray
    rhs_profile: np.ndarray
    recovered_value: float
    deltas: list[float]
    estimates: list[float]
    table: np.ndarray
    increment: float
    converged: bool

    def to_dict(self, profiles: bool = True) -> dict:
        out = {
            "point": [self.point.x, self.point.y, self.point.z],
            "recovered_value": self.recovered_value,
            "extrapolation": {
                "deltas": list(self.deltas),
                "estimates": list(self.estimates),
                "diagonal": [float(self.table[k, k]) for k in range(len(self.deltas))],
                "increment": self.increment,
                "converged": self.converged,
            },
        }
        if profiles:
            out["t_nodes"] = self.t_nodes.tolist()
            out["lhs_profile"] = self.lhs_profile.tolist()
            out["rhs_profile"] = self.rhs_profile.tolist()
        return out


def invert_abel(
    g: CircleFunction,
    x,
    N_t: int = 512,
    theta_samples: int = DEFAULT_ORBIT_NODES,
    delta0: float = 1.0 / 16.0,
    levels: int = 4,
    cauchy_tol: float = 1e-2,
    odd_rtol: float = ODD_RTOL,
) -> AbelReconstructionReport:
    """Recover ``f(x)`` from ``g = Mf`` without a harmonic expansion.

    Builds ``h(t) = (2 sqrt pi)^{-1} (M*_{arccos sqrt t} g)(x)`` on a uniform
    ``t`` grid, applies the half-order derivative to obtain
    ``f~_x(t) = t^{-1/2} (M^{sqrt t} f)(x)``, and extrapolates
    ``sqrt(t) f~_x(t)`` to ``t = 1`` from ``t = 1 - delta0 2^{-k}``.
    """
    check_range(analyze(g.fn), odd_rtol)
    x = unit(x).reshape(3)
    deltas = [delta0 / 2**k for k in range(levels)]
    idx = []
    for d in deltas:
        k = (1.0 - d) * N_t
        if abs(k - round(k)) > 1e-9 or round(k) < 1:
            raise ValueError(f"N_t={N_t} does not place a node at t = 1 - {d}")
        idx.append(int(round(k)) - 1)
    t = uniform_nodes(N_t)
    theta = np.arccos(np.sqrt(t))
    scale = 1.0 / (2.0 * math.sqrt(math.pi))
    h_vals = scale * generalized_dual(g, x, theta, theta_samples)
    h0 = scale * generalized_dual(g, x, math.pi / 2, theta_samples)
    h = RadialProfile(t, h_vals, 0.0, h0)
    ftilde = rl_derivative(h, 0.5)
    est = np.sqrt(t[idx]) * ftilde.values[idx]
    R = richardson(est)
    value = float(R[-1, -1])
    inc = float(abs(R[-1, -1] - R[-2, -2])) if levels > 1 else float("nan")
    return AbelReconstructionReport(
        point=UnitVector3.from_array(x),
        t_nodes=t,
        lhs_profile=h_vals,
        rhs_profile=ftilde.values,
        recovered_value=value,
        deltas=deltas,
        estimates=[float(e) for e in est],
        table=R,
        increment=inc,
        converged=bool(inc <= cauchy_tol * max(1.0, abs(value))),
    )
