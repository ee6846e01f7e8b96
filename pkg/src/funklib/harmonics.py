"""Real orthonormal spherical harmonics on Gauss--Legendre grids.

Convention: ``Y_{l,0} = Pbar_l^0(cos t)``, ``Y_{l,m} = sqrt(2) Pbar_l^m(cos t) cos(m p)``
and ``Y_{l,-m} = sqrt(2) Pbar_l^m(cos t) sin(m p)`` for ``m > 0``, where
``Pbar`` is the associated Legendre function normalized so that every
``Y_{l,m}`` has unit L2 norm on S^2. No Condon--Shortley phase.
Coefficients are stored flat at index ``l*l + l + m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sphere import GridFunction, SphereGrid, unit

SQRT2 = math.sqrt(2.0)


def n_coeffs(L: int) -> int:
    return (L + 1) ** 2


def lm_index(l: int, m: int) -> int:
    if abs(m) > l:
        raise ValueError(f"|m| must not exceed l, got l={l}, m={m}")
    return l * l + l + m


def degrees(L: int) -> np.ndarray:
    """Degree ``l`` of every flat coefficient slot up to bandlimit L."""
    return np.concatenate([np.full(2 * l + 1, l) for l in range(L + 1)])


def _recurrence_coeffs(L: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.zeros((L + 1, L + 1))
    b = np.zeros((L + 1, L + 1))
    diag = np.empty(L + 1)
    acc = 1.0
    for m in range(L + 1):
        if m:
            acc *= (2 * m + 1) / (2 * m)
        diag[m] = math.sqrt(acc / (4.0 * math.pi))
        for l in range(m + 1, L + 1):
            a[l, m] = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b[l, m] = -math.sqrt(
                (2 * l + 1) * ((l - 1) ** 2 - m * m) / ((2 * l - 3) * (l * l - m * m))
            )
    return diag, a, b


def legendre_table(L: int, x) -> np.ndarray:
    """Normalized ``Pbar_l^m(x)`` as an array ``(len(x), L+1, L+1)`` indexed ``[., l, m]``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    diag, a, b = _recurrence_coeffs(L)
    out = np.zeros((x.size, L + 1, L + 1))
    smm = np.ones_like(x)
    for m in range(L + 1):
        if m:
            smm = smm * s
        out[:, m, m] = diag[m] * smm
        if m + 1 <= L:
            out[:, m + 1, m] = a[m + 1, m] * x * out[:, m, m]
        for l in range(m + 2, L + 1):
            out[:, l, m] = a[l, m] * x * out[:, l - 1, m] + b[l, m] * out[:, l - 2, m]
    return out


def legendre_p0(l: int) -> float:
    """``P_l(0)`` by ``P_l(0) = -P_{l-2}(0) (l-1)/l``."""
    if l < 0:
        raise ValueError("degree must be non-negative")
    if l % 2:
        return 0.0
    p = 1.0
    for k in range(2, l + 1, 2):
        p *= -(k - 1) / k
    return p


def legendre_poly(l: int, x) -> np.ndarray:
    """Unnormalized Legendre polynomial ``P_l(x)`` by Bonnet's recurrence."""
    x = np.asarray(x, dtype=float)
    p0, p1 = np.ones_like(x), x.copy()
    if l == 0:
        return p0
    for k in range(1, l):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1


def funk_multiplier(l: int) -> float:
    """Eigenvalue ``2 pi P_l(0)`` of the great-circle transform on degree l."""
    return 2.0 * math.pi * legendre_p0(l)


@dataclass(frozen=True, eq=False)
class HarmonicSpectrum:
    """Real spherical-harmonic coefficients up to bandlimit ``L``."""

    L: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size != n_coeffs(self.L):
            raise ValueError(f"bandlimit {self.L} needs {n_coeffs(self.L)} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, L: int) -> "HarmonicSpectrum":
        return cls(L, np.zeros(n_coeffs(L)))

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], float], L: int | None = None) -> "HarmonicSpectrum":
        if L is None:
            L = max((l for l, _ in terms), default=0)
        c = np.zeros(n_coeffs(L))
        for (l, m), v in terms.items():
            c[lm_index(l, m)] += v
        return cls(L, c)

    def __getitem__(self, lm: tuple[int, int]) -> float:
        l, m = lm
        if l > self.L:
            return 0.0
        return float(self.coeffs[lm_index(l, m)])

    def __add__(self, other: "HarmonicSpectrum") -> "HarmonicSpectrum":
        L = max(self.L, other.L)
        return HarmonicSpectrum(L, self.padded(L).coeffs + other.padded(L).coeffs)

    def __mul__(self, c: float) -> "HarmonicSpectrum":
        return HarmonicSpectrum(self.L, self.coeffs * c)

    __rmul__ = __mul__

    def padded(self, L: int) -> "HarmonicSpectrum":
        """Zero-pad or truncate to bandlimit L."""
        c = np.zeros(n_coeffs(L))
        k = min(c.size, self.coeffs.size)
        c[:k] = self.coeffs[:k]
        return HarmonicSpectrum(L, c)

    def degree_scaled(self, factors) -> "HarmonicSpectrum":
        """Multiply every degree-l block by ``factors[l]``."""
        f = np.asarray(factors, dtype=float)
        return HarmonicSpectrum(self.L, self.coeffs * f[degrees(self.L)])

    def degree_norms(self) -> np.ndarray:
        return np.sqrt(np.bincount(degrees(self.L), weights=self.coeffs**2, minlength=self.L + 1))

    def effective_bandlimit(self, rtol: float = 1e-13) -> int:
        """Highest degree whose block exceeds ``rtol`` times the largest coefficient."""
        scale = float(np.max(np.abs(self.coeffs), initial=0.0))
        if scale == 0.0:
            return 0
        big = np.nonzero(self.degree_norms() > rtol * scale)[0]
        return int(big[-1]) if big.size else 0

    def trimmed(self, rtol: float = 1e-13, entry_rtol: float = 1e-15) -> "HarmonicSpectrum":
        """Cut to the effective bandlimit and zero round-off-level entries.

        Zeroed entries let :func:`evaluate` skip orders that carry no content.
        """
        out = self.padded(self.effective_bandlimit(rtol))
        scale = float(np.max(np.abs(out.coeffs), initial=0.0))
        c = np.where(np.abs(out.coeffs) > entry_rtol * scale, out.coeffs, 0.0)
        return HarmonicSpectrum(out.L, c)

    def terms(self, atol: float = 0.0) -> list[tuple[int, int, float]]:
        out = []
        for l in range(self.L + 1):
            for m in range(-l, l + 1):
                v = float(self.coeffs[lm_index(l, m)])
                if abs(v) > atol:
                    out.append((l, m, v))
        return out


def _grid_legendre(grid: SphereGrid, L: int) -> np.ndarray:
    return legendre_table(L, grid.cos_colat)


def analyze(f: GridFunction, L: int | None = None) -> HarmonicSpectrum:
    """Coefficients ``∫ f Y_{l,m}`` by grid quadrature (exact for bandlimited f)."""
    grid = f.grid
    if L is None:
        L = grid.n_lat - 1
    if L > grid.n_lat - 1:
        raise ValueError(f"bandlimit {L} exceeds grid resolution (n_lat - 1 = {grid.n_lat - 1})")
    if L >= grid.n_lon // 2:
        raise ValueError("bandlimit must stay below the longitude Nyquist order")
    vals = f.values.reshape(grid.shape)
    F = np.fft.rfft(vals, axis=1) * (2.0 * np.pi / grid.n_lon)
    cos_part = F.real[:, : L + 1]
    sin_part = -F.imag[:, : L + 1]
    P = _grid_legendre(grid, L)
    wl = np.polynomial.legendre.leggauss(grid.n_lat)[1][::-1]
    # [l, m] sums over latitude
    cc = np.einsum("i,ilm,im->lm", wl, P, cos_part)
    ss = np.einsum("i,ilm,im->lm", wl, P, sin_part)
    c = np.zeros(n_coeffs(L))
    for l in range(L + 1):
        base = l * l + l
        c[base] = cc[l, 0]
        if l:
            ms = np.arange(1, l + 1)
            c[base + ms] = SQRT2 * cc[l, 1 : l + 1]
            c[base - ms] = SQRT2 * ss[l, 1 : l + 1]
    return HarmonicSpectrum(L, c)


def evaluate(s: HarmonicSpectrum, points) -> np.ndarray:
    """Evaluate ``sum f_{l,m} Y_{l,m}`` at arbitrary points of shape ``(..., 3)``.

    Memory is linear in the number of points: the Legendre recurrence runs
    one order at a time and accumulates into the output.
    """
    p = unit(points)
    shape = p.shape[:-1]
    p = p.reshape(-1, 3)
    L = s.L
    x = np.clip(p[:, 2], -1.0, 1.0)
    sn = np.hypot(p[:, 0], p[:, 1])
    phi = np.arctan2(p[:, 1], p[:, 0])
    diag, a, b = _recurrence_coeffs(L)
    c = s.coeffs
    out = np.zeros(x.size)
    d = degrees(L)
    orders = np.abs(np.arange(c.size) - (d * d + d))
    active = np.zeros(L + 1, dtype=bool)
    active[orders[c != 0.0]] = True
    for m in np.flatnonzero(active):
        smm = sn**m
        p_lm2 = None
        p_lm1 = diag[m] * smm
        acc_c = c[m * m + m + m] * p_lm1
        acc_s = c[m * m + m - m] * p_lm1 if m else None
        for l in range(m + 1, L + 1):
            if p_lm2 is None:
                p_l = a[l, m] * x * p_lm1
            else:
                p_l = a[l, m] * x * p_lm1 + b[l, m] * p_lm2
            base = l * l + l
            acc_c = acc_c + c[base + m] * p_l
            if m:
                acc_s = acc_s + c[base - m] * p_l
            p_lm2, p_lm1 = p_lm1, p_l
        if m == 0:
            out += acc_c
        else:
            out += SQRT2 * (acc_c * np.cos(m * phi) + acc_s * np.sin(m * phi))
    return out.reshape(shape)


def synthesize(s: HarmonicSpectrum, grid: SphereGrid) -> GridFunction:
    """Pointwise sum ``sum f_{l,m} Y_{l,m}`` on the grid nodes."""
    return GridFunction(grid, evaluate(s, grid.nodes))


def ylm(l: int, m: int, points) -> np.ndarray:
    """A single real harmonic evaluated at ``points``."""
    return evaluate(HarmonicSpectrum.from_terms({(l, m): 1.0}), points)


def parity_split(f: GridFunction) -> tuple[GridFunction, GridFunction]:
    """Antipodally even and odd parts, by pairing each node with its antipode."""
    g = f.values[f.grid.antipode_index()]
    even = 0.5 * (f.values + g)
    return GridFunction(f.grid, even), GridFunction(f.grid, f.values - even)


def random_spectrum(
    rng: np.random.Generator, L: int, parity: str | None = None, scale: float = 1.0
) -> HarmonicSpectrum:
    """Gaussian coefficients; ``parity='even'``/``'odd'`` zeroes the other degrees."""
    c = scale * rng.standard_normal(n_coeffs(L))
    d = degrees(L)
    if parity == "even":
        c[d % 2 == 1] = 0.0
    elif parity == "odd":
        c[d % 2 == 0] = 0.0
    elif parity is not None:
        raise ValueError(f"unknown parity {parity!r}")
    return HarmonicSpectrum(L, c)
