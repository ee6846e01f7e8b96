"""Riemann--Liouville fractional integrals and derivatives on a uniform grid.

Profiles are sampled at ``t_k = k h`` for ``k = 1..N`` and carry a declared
power-law behaviour ``psi(t) ~ t^gamma`` at the left endpoint. The integral
uses product integration: ``phi = t^{-gamma} psi`` is interpolated linearly on
every cell and the kernel moments ``∫ (t - s)^{alpha-1} s^{gamma+j} ds`` are
integrated exactly (incomplete beta functions), so the weights are positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import betainc


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Samples of a function on ``(0, t_max]`` at uniform nodes ``t_k = k h``.

    ``left_limit`` is the optional value of ``lim_{t->0} t^{-gamma} psi(t)``.
    When it is missing, ``t^{-gamma} psi`` is held constant on the first cell.
    """

    t_nodes: np.ndarray
    values: np.ndarray
    left_endpoint_exponent: float = -0.5
    left_limit: float | None = None

    def __post_init__(self):
        t = np.array(self.t_nodes, dtype=float).ravel()
        v = np.array(self.values, dtype=float).ravel()
        if t.size < 2 or t.size != v.size:
            raise ValueError("need at least two nodes and one value per node")
        h = t[0]
        if not h > 0 or np.max(np.abs(np.diff(t) - h)) > 1e-14 * max(1.0, t[-1]) * t.size:
            raise ValueError("t_nodes must be uniform with t_1 equal to the spacing")
        if t[-1] > 1.0 + 1e-14:
            raise ValueError("t_nodes must lie in (0, 1]")
        if self.left_endpoint_exponent <= -1.0:
            raise ValueError("endpoint exponent must exceed -1 for integrability")
        for arr in (t, v):
            arr.setflags(write=False)
        object.__setattr__(self, "t_nodes", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(
        cls,
        func: Callable[[np.ndarray], np.ndarray],
        N: int = 512,
        t_max: float = 1.0,
        exponent: float = -0.5,
        left_limit: float | None = None,
    ) -> "RadialProfile":
        t = uniform_nodes(N, t_max)
        return cls(t, func(t), exponent, left_limit)

    @property
    def h(self) -> float:
        return float(self.t_nodes[0])

    @property
    def N(self) -> int:
        return self.t_nodes.size

    def with_values(self, values, exponent: float, left_limit: float | None = None) -> "RadialProfile":
        return RadialProfile(self.t_nodes, values, exponent, left_limit)


def uniform_nodes(N: int, t_max: float = 1.0) -> np.ndarray:
    return t_max * np.arange(1, N + 1) / N


def _kernel_moment(p: float, a, b, t, alpha: float) -> np.ndarray:
    """``∫_a^b (t - s)^{alpha-1} s^p ds`` for ``0 <= a <= b <= t``, elementwise."""
    a, b, t = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, t)))
    xa = np.where(t > 0, a / np.where(t > 0, t, 1.0), 0.0)
    xb = np.where(t > 0, b / np.where(t > 0, t, 1.0), 0.0)
    xa, xb = np.clip(xa, 0.0, 1.0), np.clip(xb, 0.0, 1.0)
    lo = betainc(p + 1.0, alpha, xb) - betainc(p + 1.0, alpha, xa)
    # near the singular end subtract complements instead: I_x(a,b) = 1 - I_{1-x}(b,a)
    hi = betainc(alpha, p + 1.0, 1.0 - xa) - betainc(alpha, p + 1.0, 1.0 - xb)
    reg = np.where(xa > 0.5, hi, lo)
    return t ** (alpha + p) * beta_fn(p + 1.0, alpha) * reg


@lru_cache(maxsize=32)
def _unit_weights(N: int, alpha: float, gamma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = np.arange(1, N + 1, dtype=float)
    edges = np.arange(N + 1, dtype=float)
    a = np.broadcast_to(edges[:-1][None, :], (N, N))  # cell j spans [a_j, b_j]
    b = np.broadcast_to(edges[1:][None, :], (N, N))
    tk = np.broadcast_to(t[:, None], (N, N))
    active = np.arange(N)[None, :] <= np.arange(N)[:, None]
    A = np.zeros((N, N))
    B = np.zeros((N, N))
    A[active] = _kernel_moment(gamma, a[active], b[active], tk[active], alpha)
    B[active] = _kernel_moment(gamma + 1.0, a[active], b[active], tk[active], alpha)
    left = b * A - B
    right = B - a * A
    W = right.copy()  # right node of cell j is node j
    W[:, :-1] += left[:, 1:]  # left node of cell j >= 1 is node j-1
    w_hold = W[:, 0] - right[:, 0] + A[:, 0]
    out = (W, left[:, 0].copy(), w_hold)
    for arr in out:
        arr.setflags(write=False)
    return out


def rl_weights(t_nodes: np.ndarray, alpha: float, gamma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Product-integration weights for ``Gamma(alpha) (I^alpha psi)(t_k)``.

    With ``phi_j = t_j^{-gamma} psi_j`` the result is ``W @ phi`` plus the
    first-cell term: ``w_left * phi_0`` when the left limit ``phi_0`` is known
    (linear interpolation on the first cell), else nothing extra and ``W[:, 0]``
    must be replaced by ``w_hold`` (``phi`` held at ``phi_1`` on the first cell).
    Returns ``(W, w_left, w_hold)``.

    Weights on the nodes ``k h`` are ``h^(alpha + gamma)`` times those on the
    integer nodes, which are cached per ``(N, alpha, gamma)``.
    """
    t = np.asarray(t_nodes, dtype=float)
    scale = t[0] ** (alpha + gamma)
    return tuple(scale * w for w in _unit_weights(t.size, float(alpha), float(gamma)))


def rl_integral(psi: RadialProfile, alpha: float) -> RadialProfile:
    """``(I^alpha psi)(t) = Gamma(alpha)^{-1} ∫_0^t psi(s) (t - s)^{alpha-1} ds`` on the nodes of ``psi``."""
    if not alpha > 0:
        raise ValueError(f"fractional order must be positive, got {alpha!r}")
    gamma = psi.left_endpoint_exponent
    t = psi.t_nodes
    phi = psi.values * t ** (-gamma)
    W, w_left, w_hold = rl_weights(t, alpha, gamma)
    if psi.left_limit is None:
        out = W[:, 1:] @ phi[1:] + w_hold * phi[0]
        left_limit = None
    else:
        out = W @ phi + w_left * psi.left_limit
        left_limit = psi.left_limit * math.gamma(gamma + 1) / math.gamma(gamma + alpha + 1)
    out = out / math.gamma(alpha)
    return psi.with_values(out, gamma + alpha, left_limit)


def fd_derivative(u: np.ndarray, h: float, u0: float | None = None) -> np.ndarray:
    """Fourth-order finite-difference derivative on uniform nodes ``t_k = k h``.

    ``u0`` is the value at ``t = 0`` when known; it then joins the left stencils.
    """
    u = np.asarray(u, dtype=float)
    if u0 is not None:
        v = np.concatenate([[u0], u])
        off = 1
    else:
        v = u
        off = 0
    n = v.size
    if n < 5:
        raise ValueError("need at least five samples")
    d = np.empty(n)
    d[2:-2] = (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * h)
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h)
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h)
    d[-1] = (25.0 * v[-1] - 48.0 * v[-2] + 36.0 * v[-3] - 16.0 * v[-4] + 3.0 * v[-5]) / (12.0 * h)
    d[-2] = (3.0 * v[-1] + 10.0 * v[-2] - 18.0 * v[-3] + 6.0 * v[-4] - v[-5]) / (12.0 * h)
    return d[off:]


def rl_derivative(g: RadialProfile, alpha: float) -> RadialProfile:
    """``D^alpha g = d/dt I^{1-alpha} g`` for ``0 < alpha < 1``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"derivative order must lie in (0, 1), got {alpha!r}")
    u = rl_integral(g, 1.0 - alpha)
    u0 = 0.0 if u.left_endpoint_exponent > 0 else None
    d = fd_derivative(u.values, g.h, u0)
    return g.with_values(d, g.left_endpoint_exponent - alpha)


def power_integral(alpha: float, beta: float, t) -> np.ndarray:
    """Closed form ``I^alpha t^beta = Gamma(beta+1)/Gamma(alpha+beta+1) t^{alpha+beta}``."""
    return math.gamma(beta + 1) / math.gamma(alpha + beta + 1) * np.asarray(t, dtype=float) ** (alpha + beta)


def power_derivative(alpha: float, beta: float, t) -> np.ndarray:
    """Closed form ``D^alpha t^beta = Gamma(beta+1)/Gamma(beta+1-alpha) t^{beta-alpha}``."""
    return math.gamma(beta + 1) / math.gamma(beta + 1 - alpha) * np.asarray(t, dtype=float) ** (beta - alpha)
