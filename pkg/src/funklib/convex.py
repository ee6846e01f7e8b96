"""Convex bodies through their support functions: width, circumference, and
the constant-width / constant-circumference equivalence.

The circumference ``U(w)`` of a smooth body in direction ``w`` is computed two
ways: half the great-circle integral of the width ``B`` over ``w^⊥``, and the
arc length ``∫ (h + h'') dphi`` of the shadow boundary, where ``h`` is the
support function restricted to the great circle ``w^⊥``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvexityError
from .harmonics import HarmonicSpectrum, evaluate, parity_split, random_spectrum
from .sphere import (
    GreatCircle,
    GridFunction,
    SphereGrid,
    UnitVector3,
    circle_points,
    fibonacci_directions,
    unit,
)
from .transforms import funk

CERT_ORIENTATIONS = 64
CERT_ANGLES = 256
SECTION_NODES = 256


@dataclass(frozen=True, eq=False)
class SupportBody:
    """A convex body given by its support function ``H`` on S^2.

    ``kind`` is ``"ball"``, ``"ellipsoid"`` or ``"harmonic"``. Construct with
    :func:`make_body`, which runs the positivity and convexity certificates.
    """

    kind: str
    params: tuple = ()
    spectrum: HarmonicSpectrum | None = None
    smooth: bool = True

    def H(self, points) -> np.ndarray:
        p = unit(points)
        if self.kind == "ball":
            return np.full(p.shape[:-1], float(self.params[0]))
        if self.kind == "ellipsoid":
            a = np.asarray(self.params, dtype=float)
            return np.sqrt(np.sum((a * p) ** 2, axis=-1))
        if self.kind == "harmonic":
            return evaluate(self.spectrum, p)
        raise ValueError(f"unknown body kind {self.kind!r}")

    def scaled(self, lam: float) -> "SupportBody":
        """The dilate ``lam * body`` (support function ``lam * H``)."""
        if not lam > 0:
            raise ValueError("scale must be positive")
        if self.kind == "ball":
            return SupportBody("ball", (lam * self.params[0],))
        if self.kind == "ellipsoid":
            return SupportBody("ellipsoid", tuple(lam * a for a in self.params))
        return SupportBody("harmonic", spectrum=self.spectrum * lam)

    def describe(self) -> str:
        if self.kind == "harmonic":
            return f"harmonic(L={self.spectrum.L})"
        return f"{self.kind}{tuple(self.params)}"


@dataclass(frozen=True, eq=False)
class DirectionTable:
    """Values of a directional functional over a direction set."""

    directions: np.ndarray
    values: np.ndarray
    name: str = "value"

    def __post_init__(self):
        if len(self.directions) != len(self.values):
            raise ValueError("directions and values must align")

    def spread(self) -> float:
        """``(max - min) / mean``."""
        v = self.values
        return float((v.max() - v.min()) / abs(v.mean()))


def section_samples(body: SupportBody, omega, m: int = SECTION_NODES) -> np.ndarray:
    """``h(phi) = H(r (cos phi, sin phi, 0))`` at ``phi_j = 2 pi j / m``, r taking e_3 to omega."""
    return body.H(circle_points(unit(omega), 0.0, m))


def _wavenumbers(m: int) -> np.ndarray:
    return np.fft.rfftfreq(m, 1.0 / m)


def spectral_second_derivative(h: np.ndarray) -> np.ndarray:
    """``h''`` of periodic samples on ``[0, 2 pi)`` (last axis) by FFT."""
    m = h.shape[-1]
    k = _wavenumbers(m)
    H = np.fft.rfft(h, axis=-1)
    return np.fft.irfft(-(k**2) * H, n=m, axis=-1)


def convexity_margin(body: SupportBody, poles, m: int = CERT_ANGLES) -> tuple[np.ndarray, np.ndarray]:
    """``min_phi (h + h'')`` per section and the angle index where it is attained."""
    h = section_samples(body, poles, m)
    q = h + spectral_second_derivative(h)
    return q.min(axis=-1), q.argmin(axis=-1)


def certify(
    body: SupportBody,
    orientations: int = CERT_ORIENTATIONS,
    angles: int = CERT_ANGLES,
    positivity_grid: SphereGrid | None = None,
) -> None:
    """Raise :class:`ConvexityError` unless ``H > 0`` and ``h + h'' > 0`` on all sampled sections."""
    grid = positivity_grid or SphereGrid(32)
    Hg = body.H(grid.nodes)
    if Hg.min() <= 0:
        i = int(Hg.argmin())
        raise ConvexityError(
            f"support function is not positive (min {Hg.min():.4g}); origin is not interior",
            pole=grid.nodes[i].tolist(),
            value=float(Hg.min()),
        )
    poles = fibonacci_directions(orientations, hemisphere=True)
    margin, where = convexity_margin(body, poles, angles)
    k = int(margin.argmin())
    if margin[k] <= 0:
        phi = 2.0 * math.pi * int(where[k]) / angles
        raise ConvexityError(
            f"convexity certificate failed: h + h'' = {margin[k]:.4g} at phi = {phi:.4f} "
            f"on the section with pole {np.round(poles[k], 6).tolist()}",
            pole=poles[k].tolist(),
            phi=phi,
            value=float(margin[k]),
        )


def make_body(kind: str, *params, spectrum: HarmonicSpectrum | None = None, validate: bool = True) -> SupportBody:
    """Build and certify a body: ``ball(R)``, ``ellipsoid(a, b, c)`` or ``harmonic(spectrum)``."""
    if kind == "ball":
        if len(params) != 1 or not params[0] > 0:
            raise ValueError("ball needs one positive radius")
        body = SupportBody("ball", (float(params[0]),))
    elif kind == "ellipsoid":
        if len(params) != 3 or min(params) <= 0:
            raise ValueError("ellipsoid needs three positive semi-axes")
        body = SupportBody("ellipsoid", tuple(float(a) for a in params))
    elif kind == "harmonic":
        if spectrum is None:
            raise ValueError("harmonic body needs a spectrum")
        body = SupportBody("harmonic", spectrum=spectrum)
    else:
        raise ValueError(f"unknown body kind {kind!r}")
    if validate:
        certify(body)
    return body


def random_harmonic_body(
    rng: np.random.Generator,
    L: int = 6,
    parity: str | None = None,
    scale: float = 0.1,
    radius: float = 1.0,
    max_tries: int = 20,
) -> SupportBody:
    """A certified body ``H = radius + p`` with ``p`` a random degree-``1..L`` perturbation.

    ``parity='odd'`` gives a body of constant width ``2 radius``. The
    perturbation is halved until the convexity certificate passes.
    """
    p = random_spectrum(rng, L, parity, scale).coeffs.copy()
    p[0] = 0.0
    base = np.zeros_like(p)
    base[0] = radius * math.sqrt(4.0 * math.pi)
    for _ in range(max_tries):
        try:
            return make_body("harmonic", spectrum=HarmonicSpectrum(L, base + p))
        except ConvexityError:
            p *= 0.5
    raise ConvexityError("no valid perturbation found")


def width(body: SupportBody, omega) -> np.ndarray | float:
    """``B(w) = H(w) + H(-w)``."""
    w = unit(omega)
    out = body.H(w) + body.H(-w)
    return float(out) if np.ndim(out) == 0 else out


def circumference_funk(body: SupportBody, omega, m: int = SECTION_NODES) -> np.ndarray | float:
    """Half the great-circle integral of the width over ``omega^⊥``.

    A single direction is integrated in the basis of its :class:`GreatCircle`;
    arrays of directions use the vectorized frames.
    """
    w = unit(omega)
    if w.ndim == 1:
        u, v = GreatCircle(UnitVector3.from_array(w)).basis()
        ang = 2.0 * math.pi * np.arange(m) / m
        pts = np.cos(ang)[:, None] * u + np.sin(ang)[:, None] * v
        return float(0.5 * np.sum(width(body, pts)) * 2.0 * math.pi / m)
    pts = circle_points(w, 0.0, m)
    return 0.5 * np.sum(width(body, pts), axis=-1) * 2.0 * math.pi / m


def circumference_direct(body: SupportBody, omega, m: int = SECTION_NODES, check_tol: float = 1e-9) -> float:
    """Arc length ``∫_0^{2 pi} (h + h'') dphi`` of the shadow boundary.

    ``h''`` comes from spectral differentiation. The simplified ``∫ h dphi``
    (the ``h''`` term integrates to zero) is computed alongside and must agree.
    """
    w = unit(omega).reshape(3)
    h = section_samples(body, w, m)
    q = h + spectral_second_derivative(h)
    if q.min() <= 0:
        j = int(q.argmin())
        raise ConvexityError(
            f"h + h'' = {q[j]:.4g} <= 0 at phi = {2 * math.pi * j / m:.4f}: section is not convex",
            pole=w.tolist(),
            phi=2 * math.pi * j / m,
            value=float(q[j]),
        )
    dphi = 2.0 * math.pi / m
    U = float(np.sum(q) * dphi)
    simple = float(np.sum(h) * dphi)
    if abs(U - simple) > check_tol * abs(U):
        raise ArithmeticError(f"arc-length forms disagree: {U!r} vs {simple!r}")
    return U


def _section_series(body: SupportBody, omega, m: int):
    h = section_samples(body, omega, m)
    return np.fft.rfft(h) / m, _wavenumbers(m)


def _trig_eval(c: np.ndarray, k: np.ndarray, phi, deriv: int, m: int) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    w = np.where((k == 0) | ((m % 2 == 0) & (k == m // 2)), 1.0, 2.0)
    e = np.exp(1j * np.multiply.outer(phi, k))
    return np.real(e @ (w * (1j * k) ** deriv * c))


def section_derivatives(body: SupportBody, omega, phi, m: int = SECTION_NODES):
    """``(h, h', h'')`` at arbitrary angles by trigonometric interpolation."""
    c, k = _section_series(body, unit(omega).reshape(3), m)
    return tuple(_trig_eval(c, k, phi, d, m) for d in (0, 1, 2))


def shadow_boundary(body: SupportBody, omega, phi, m: int = SECTION_NODES):
    """Envelope point ``(h cos - h' sin, h sin + h' cos)`` of the support lines at ``phi``."""
    h, dh, _ = section_derivatives(body, omega, phi, m)
    c, s = np.cos(phi), np.sin(phi)
    return h * c - dh * s, h * s + dh * c


def section_curvature(body: SupportBody, omega, phi, m: int = SECTION_NODES):
    """Curvature ``1 / (h + h'')`` of the shadow boundary."""
    h, _, d2h = section_derivatives(body, omega, phi, m)
    return 1.0 / (h + d2h)


@dataclass(frozen=True, eq=False)
class MinkowskiReport:
    constant_width: bool
    constant_circumference: bool
    spread_B: float
    spread_U: float
    widths: DirectionTable = field(repr=False)
    circumferences: DirectionTable = field(repr=False)

    @property
    def agree(self) -> bool:
        return self.constant_width == self.constant_circumference

    def summary(self) -> dict:
        return {
            "constant_width": self.constant_width,
            "constant_circumference": self.constant_circumference,
            "spread_B": self.spread_B,
            "spread_U": self.spread_U,
            "mean_B": float(self.widths.values.mean()),
            "mean_U": float(self.circumferences.values.mean()),
        }


def direction_grid(directions: int) -> SphereGrid:
    return SphereGrid(directions)


def minkowski_check(
    body: SupportBody, directions: int = 16, tol: float = 1e-6, m: int = SECTION_NODES
) -> MinkowskiReport:
    """Widths and circumferences over the nodes of a ``SphereGrid(directions)``.

    Each is declared constant when ``max - min <= tol * mean``.
    """
    dirs = direction_grid(directions).nodes
    B = DirectionTable(dirs, np.asarray(width(body, dirs)), "width")
    U = DirectionTable(dirs, np.asarray(circumference_funk(body, dirs, m)), "circumference")
    sB, sU = B.spread(), U.spread()
    return MinkowskiReport(sB <= tol, sU <= tol, sB, sU, B, U)


def width_function(body: SupportBody, grid: SphereGrid) -> GridFunction:
    return GridFunction(grid, width(body, grid.nodes))


def circumference_via_transform(body: SupportBody, grid: SphereGrid) -> GridFunction:
    """``U = (1/2) M B`` with the width sampled on ``grid``."""
    return GridFunction(grid, 0.5 * funk(width_function(body, grid)).values)


def odd_kernel_residual(body: SupportBody, c: float, grid: SphereGrid | None = None) -> float:
    """Sup norm of the even part of ``B - c / pi`` for circumference ``c``.

    For a body of constant circumference ``c`` the difference lies in the
    kernel of the great-circle transform, hence is odd; being a width, it is
    also even, so it vanishes.
    """
    grid = grid or SphereGrid(32)
    even, _ = parity_split(width_function(body, grid) - c / math.pi)
    return even.max_abs()

