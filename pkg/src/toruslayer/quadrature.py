"""Quadrature rules and the M-weighted inner product over (theta, q)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from toruslayer.geometry import TorusGeometry, measure

# Newton stopping tolerance on the Legendre roots.
_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


@dataclass(frozen=True)
class Grid1D:
    """One-dimensional rule.

    ``exact_degree`` is the highest polynomial degree (Gauss-Legendre) or
    trigonometric degree (periodic trapezoid) integrated exactly.
    ``domain`` is None for the degenerate single-node surface rule.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple[float, float] | None
    exact_degree: int

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def _legendre_and_derivative(n, x):
    # Three-term recurrence for P_n and P_n'.
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(n: int, lo: float = -1.0, hi: float = 1.0) -> Grid1D:
    """n-point Gauss-Legendre rule on [lo, hi], exact to degree 2n-1.

    Roots of P_n are found by Newton iteration from the cosine guesses
    cos(pi (i + 3/4) / (n + 1/2)).
    """
    if n < 1:
        raise ValueError(f"Gauss-Legendre needs n >= 1, got {n}")
    if not hi > lo:
        raise ValueError(f"degenerate interval [{lo}, {hi}]")
    if n == 1:
        x = np.array([0.0])
        w = np.array([2.0])
    else:
        i = np.arange(n)
        x = np.cos(np.pi * (i + 0.75) / (n + 0.5))
        for _ in range(_NEWTON_MAXITER):
            p, dp = _legendre_and_derivative(n, x)
            dx = p / dp
            x = x - dx
            if np.max(np.abs(dx)) < _NEWTON_TOL:
                break
        p, dp = _legendre_and_derivative(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        x = x[::-1].copy()
        w = w[::-1].copy()
        # the rule is symmetric; enforce it exactly
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return Grid1D(mid + half * x, half * w, (float(lo), float(hi)), 2 * n - 1)


def periodic_trapezoid(n: int) -> Grid1D:
    """Equispaced rule on [0, 2pi): nodes 2 pi i / n, weights 2 pi / n.

    Exact for trigonometric polynomials of degree < n.
    """
    if n < 1:
        raise ValueError(f"periodic trapezoid needs n >= 1, got {n}")
    nodes = 2.0 * np.pi * np.arange(n) / n
    return Grid1D(nodes, np.full(n, 2.0 * np.pi / n), (0.0, 2.0 * np.pi), n - 1)


def surface_node() -> Grid1D:
    """The single node q = 0 with unit weight used by surface-only models."""
    return Grid1D(np.array([0.0]), np.array([1.0]), None, 0)


@dataclass(frozen=True)
class ProductGrid:
    theta_grid: Grid1D
    q_grid: Grid1D
    measure_values: np.ndarray  # M(theta_i, q_j), shape (n_theta, n_q)
    phi_factor: float = 2.0 * math.pi

    @property
    def shape(self):
        return self.measure_values.shape

    @property
    def theta(self):
        """Theta nodes broadcast to the grid shape."""
        return np.broadcast_to(self.theta_grid.nodes[:, None], self.shape)

    @property
    def q(self):
        return np.broadcast_to(self.q_grid.nodes[None, :], self.shape)

    @property
    def weights(self):
        """Combined weights phi_factor * w_i * w_j * M_ij."""
        return (
            self.phi_factor
            * np.outer(self.theta_grid.weights, self.q_grid.weights)
            * self.measure_values
        )

    @property
    def is_surface(self) -> bool:
        return self.q_grid.domain is None


def product_grid(geom: TorusGeometry, theta_grid: Grid1D, q_grid: Grid1D) -> ProductGrid:
    p = geom.point(theta_grid.nodes[:, None], q_grid.nodes[None, :])
    values = np.asarray(measure(geom, p), dtype=float)
    return ProductGrid(theta_grid, q_grid, values)


def surface_grid(geom: TorusGeometry, theta_grid: Grid1D) -> ProductGrid:
    """Grid for surface models: q collapses to 0, measure M(theta, 0)."""
    return product_grid(geom, theta_grid, surface_node())


def inner_product(f, g, grid: ProductGrid) -> float:
    """<f, g> = 2 pi * sum_ij w_i w_j f_ij g_ij M_ij over grid samples."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != grid.shape or g.shape != grid.shape:
        raise ValueError(
            f"samples of shape {f.shape} and {g.shape} do not match grid {grid.shape}"
        )
    # f*g first so the result is symmetric in f and g bit for bit
    return float(np.sum(grid.weights * (f * g)))
