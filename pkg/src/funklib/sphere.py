"""Geometry of S^2: unit vectors, rotations, great circles and quadrature rules.

Everything here is immutable. Vectorized helpers operate on ``(..., 3)``
arrays; the small value types wrap single points for the public API.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def sphere_area(n: int) -> float:
    """Surface area of S^{n-1} in R^n, ``2 pi^{n/2} / Gamma(n/2)``."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class UnitVector3:
    """A point of S^2. The constructor normalizes its input."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        r = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if not np.isfinite(r) or r == 0.0:
            raise ValueError("cannot normalize a zero or non-finite vector")
        object.__setattr__(self, "x", self.x / r)
        object.__setattr__(self, "y", self.y / r)
        object.__setattr__(self, "z", self.z / r)

    @classmethod
    def from_array(cls, v) -> "UnitVector3":
        v = np.asarray(v, dtype=float).reshape(3)
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_angles(cls, colatitude: float, longitude: float) -> "UnitVector3":
        s = math.sin(colatitude)
        return cls(s * math.cos(longitude), s * math.sin(longitude), math.cos(colatitude))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)

    def dot(self, other) -> float:
        return float(self.as_array() @ as_points(other))


def as_points(p) -> np.ndarray:
    """Coerce a UnitVector3, a sequence of them, or an array to a float array."""
    if isinstance(p, UnitVector3):
        return p.as_array()
    if isinstance(p, (list, tuple)) and p and isinstance(p[0], UnitVector3):
        return np.array([q.as_array() for q in p])
    return np.asarray(p, dtype=float)


def unit(p) -> np.ndarray:
    """Like :func:`as_points` but normalized along the last axis."""
    v = as_points(p)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0):
        raise ValueError("cannot normalize a zero vector")
    return v / n


@dataclass(frozen=True, eq=False)
class Rotation:
    """Proper orthogonal 3x3 matrix acting on column vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float).reshape(3, 3)
        if np.max(np.abs(m.T @ m - np.eye(3))) > 1e-12:
            raise ValueError("matrix is not orthogonal")
        if abs(np.linalg.det(m) - 1.0) > 1e-12:
            raise ValueError("matrix is not a proper rotation (det != +1)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.eye(3))

    @classmethod
    def about_axis(cls, axis, angle: float) -> "Rotation":
        """Right-handed rotation by ``angle`` about ``axis`` (Rodrigues)."""
        k = as_points(axis)
        k = k / np.linalg.norm(k)
        kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
        m = np.eye(3) + math.sin(angle) * kx + (1.0 - math.cos(angle)) * (kx @ kx)
        return cls(_polish(m))

    def apply(self, v):
        """Rotate a UnitVector3 (returns UnitVector3) or an ``(..., 3)`` array."""
        if isinstance(v, UnitVector3):
            return UnitVector3.from_array(self.matrix @ v.as_array())
        return np.asarray(v, dtype=float) @ self.matrix.T

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(_polish(self.matrix @ other.matrix))

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T.copy())


def _polish(m: np.ndarray) -> np.ndarray:
    # one Newton step toward the nearest orthogonal matrix; kills rounding drift
    return 0.5 * (m + np.linalg.inv(m).T)


def make_rotation_g(k: int, theta: float) -> Rotation:
    """Rotation in the e_k--e_3 plane with block ``[[sin, cos], [-cos, sin]]``.

    It maps e_3 to ``e_k cos(theta) + e_3 sin(theta)``, so the image of the
    north pole sits at geodesic distance ``theta`` from the equator.
    """
    if k not in (1, 2):
        raise ValueError(f"axis index must be 1 or 2, got {k!r}")
    s, c = math.sin(theta), math.cos(theta)
    i = k - 1
    m = np.eye(3)
    m[i, i] = s
    m[i, 2] = c
    m[2, i] = -c
    m[2, 2] = s
    return Rotation(m)


def north_frames(points) -> np.ndarray:
    """Vectorized minimal-geodesic frames taking e_3 to each point.

    Returns an array of shape ``(..., 3, 3)`` whose columns are the images
    of e_1, e_2, e_3. The south pole maps by a half turn about e_1.
    """
    p = as_points(points)
    a, b, c = p[..., 0], p[..., 1], p[..., 2]
    rho2 = a * a + b * b
    safe = rho2 > 0.0
    # (1 - c) / (a^2 + b^2) equals 1 / (1 + c) on the sphere, without cancellation
    q = np.where(safe, (1.0 - c) / np.where(safe, rho2, 1.0), 0.0)
    out = np.empty(p.shape[:-1] + (3, 3))
    out[..., 0, 0] = 1.0 - q * a * a
    out[..., 1, 0] = -q * a * b
    out[..., 2, 0] = -a
    out[..., 0, 1] = -q * a * b
    out[..., 1, 1] = 1.0 - q * b * b
    out[..., 2, 1] = -b
    out[..., :, 2] = p
    south = (~safe) & (c < 0)
    if np.any(south):
        out[south] = np.diag([1.0, -1.0, -1.0])
    north = (~safe) & (c >= 0)
    if np.any(north):
        out[north] = np.eye(3)
    return out


def rotation_taking_north_to(theta) -> Rotation:
    """The minimal geodesic rotation r with ``r e_3 = theta``.

    Rotates about ``e_3 x theta``; at ``theta = -e_3`` returns the half turn
    about e_1.
    """
    return Rotation(north_frames(unit(theta).reshape(3)))


def _canonical_sign(p: np.ndarray) -> np.ndarray:
    for comp in (p[2], p[1], p[0]):
        if comp > 0:
            return p
        if comp < 0:
            return -p
    return p


@dataclass(frozen=True)
class GreatCircle:
    """The great circle ``S^2 ∩ pole^⊥``; poles p and -p name the same circle."""

    pole: UnitVector3

    def __post_init__(self):
        if not isinstance(self.pole, UnitVector3):
            object.__setattr__(self, "pole", UnitVector3.from_array(self.pole))
        c = _canonical_sign(self.pole.as_array())
        object.__setattr__(self, "pole", UnitVector3.from_array(c))

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal basis ``(u, v)`` of the plane of the circle."""
        f = north_frames(self.pole.as_array())
        return f[:, 0], f[:, 1]

    def contains(self, x, tol: float = 1e-12) -> bool:
        return abs(float(as_points(x) @ self.pole.as_array())) <= tol


def circle_points(centers, height, m: int, phase: float = 0.0) -> np.ndarray:
    """Equispaced points on the circles ``{s : s . c = height}``.

    ``centers`` has shape ``(..., 3)`` and ``height`` broadcasts against its
    leading shape. Returns ``(..., m, 3)``. Frames come from
    :func:`north_frames`, so the first node of each circle is the image of
    ``e_1`` direction lifted to the given height.
    """
    c = as_points(centers)
    frames = north_frames(c)
    t = np.asarray(height, dtype=float)
    r = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    ang = phase + 2.0 * np.pi * np.arange(m) / m
    cs, sn = np.cos(ang), np.sin(ang)
    u = frames[..., :, 0]
    v = frames[..., :, 1]
    t = np.broadcast_to(t, c.shape[:-1])[..., None, None]
    r = np.broadcast_to(r, c.shape[:-1])[..., None, None]
    return t * c[..., None, :] + r * (
        cs[:, None] * u[..., None, :] + sn[:, None] * v[..., None, :]
    )


def great_circle_nodes(xi: GreatCircle, m: int) -> list[tuple[UnitVector3, float]]:
    """Trapezoidal rule on a great circle; weights ``2 pi / m`` sum to 2 pi."""
    if m < 4:
        raise ValueError("need at least 4 circle nodes")
    u, v = xi.basis()
    ang = 2.0 * np.pi * np.arange(m) / m
    w = 2.0 * np.pi / m
    return [(UnitVector3.from_array(math.cos(a) * u + math.sin(a) * v), w) for a in ang]


def latitude_circle_nodes(theta, t: float, m: int) -> list[tuple[UnitVector3, float]]:
    """Averaging rule on ``{s : s . theta = t}``; weights ``1/m`` sum to 1."""
    if not abs(t) < 1.0:
        raise ValueError(f"height must satisfy |t| < 1, got {t!r}")
    if m < 4:
        raise ValueError("need at least 4 circle nodes")
    pts = circle_points(unit(theta), t, m)
    return [(UnitVector3.from_array(p), 1.0 / m) for p in pts]


def zonal_reduction(F: Callable[[np.ndarray], np.ndarray], m: int = 64) -> float:
    """``∫_{S^1} F(eta . e) d eta`` via Gauss--Chebyshev, ``2 ∫ F (1-τ²)^{-1/2} dτ``."""
    tau = np.cos((2.0 * np.arange(1, m + 1) - 1.0) * np.pi / (2.0 * m))
    return float(2.0 * np.pi / m * np.sum(F(tau)))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Gauss--Legendre colatitudes times uniform longitudes.

    Nodes are stored latitude-major: index ``i * n_lon + j`` is colatitude
    ``i`` (north to south) and longitude ``2 pi j / n_lon``.
    """

    n_lat: int = 64
    n_lon: int | None = None
    cos_colat: np.ndarray = field(init=False, repr=False)
    lon: np.ndarray = field(init=False, repr=False)
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_lat < 2:
            raise ValueError("n_lat must be at least 2")
        n_lon = 2 * self.n_lat if self.n_lon is None else int(self.n_lon)
        if n_lon % 2:
            raise ValueError("n_lon must be even for antipodal symmetry")
        object.__setattr__(self, "n_lon", n_lon)
        x, w = np.polynomial.legendre.leggauss(self.n_lat)
        # leggauss returns ascending nodes; store north to south
        x, w = x[::-1].copy(), w[::-1].copy()
        lon = 2.0 * np.pi * np.arange(n_lon) / n_lon
        s = np.sqrt(1.0 - x * x)
        nodes = np.stack(
            [
                np.outer(s, np.cos(lon)),
                np.outer(s, np.sin(lon)),
                np.repeat(x[:, None], n_lon, axis=1),
            ],
            axis=-1,
        ).reshape(-1, 3)
        weights = np.outer(w, np.full(n_lon, 2.0 * np.pi / n_lon)).ravel()
        for name, arr in (("cos_colat", x), ("lon", lon), ("nodes", nodes), ("weights", weights)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return self.n_lat * self.n_lon

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_lat, self.n_lon)

    def antipode_index(self) -> np.ndarray:
        """Index permutation sending each node to its antipode."""
        i = np.arange(self.n_lat)[:, None]
        j = np.arange(self.n_lon)[None, :]
        return ((self.n_lat - 1 - i) * self.n_lon + (j + self.n_lon // 2) % self.n_lon).ravel()

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float).ravel()))

    def sample(self, f: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Evaluate a vectorized ``f(points (N, 3)) -> (N,)`` on the nodes."""
        return GridFunction(self, np.asarray(f(self.nodes), dtype=float))

    def __eq__(self, other):
        return isinstance(other, SphereGrid) and self.shape == other.shape

    def __hash__(self):
        return hash(self.shape)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Scalar field sampled on a :class:`SphereGrid`."""

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size != self.grid.size:
            raise ValueError(f"expected {self.grid.size} values, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, grid: SphereGrid, c: float) -> "GridFunction":
        return cls(grid, np.full(grid.size, float(c)))

    def integral(self) -> float:
        return self.grid.integrate(self.values)

    def antipodal(self) -> "GridFunction":
        """The function ``x -> f(-x)``."""
        return GridFunction(self.grid, self.values[self.grid.antipode_index()])

    def __add__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.grid, self.values + other.values)
        return GridFunction(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.grid, self.values - other.values)
        return GridFunction(self.grid, self.values - other)

    def __mul__(self, c: float):
        return GridFunction(self.grid, self.values * c)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def fibonacci_directions(n: int, hemisphere: bool = False) -> np.ndarray:
    """Quasi-uniform golden-spiral directions, shape ``(n, 3)``."""
    k = np.arange(n) + 0.5
    z = 1.0 - k / n if hemisphere else 1.0 - 2.0 * k / n
    phi = np.pi * (3.0 - math.sqrt(5.0)) * k
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)

