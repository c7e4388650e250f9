"""Torus-with-normal-offset coordinates.

A point near the torus is r(theta, phi, q) = (R + a cos theta) rho_hat
+ a sin theta k_hat + q n_hat, giving the diagonal metric

    ds^2 = (a+q)^2 dtheta^2 + (R + (a+q) cos theta)^2 dphi^2 + dq^2.

All functions accept scalars or numpy arrays for ``theta`` and ``q`` and
broadcast. Units: lengths in angstrom, energies in 1/angstrom^2 (hbar = m = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from toruslayer.errors import DomainError


@dataclass(frozen=True)
class TorusGeometry:
    """Major radius ``R`` and minor radius ``a`` (angstrom), 0 < a < R."""

    R: float
    a: float

    def __post_init__(self):
        if not (np.isfinite(self.R) and np.isfinite(self.a)):
            raise DomainError("torus radii must be finite")
        if self.R <= 0 or self.a <= 0:
            raise DomainError(f"torus radii must be positive (R={self.R}, a={self.a})")
        if self.a >= self.R:
            raise DomainError(f"minor radius must satisfy a < R (a={self.a}, R={self.R})")

    @property
    def alpha(self) -> float:
        """Aspect ratio a/R, in (0, 1)."""
        return self.a / self.R

    def F(self, theta):
        """Dimensionless surface factor F = 1 + alpha cos(theta)."""
        return 1.0 + self.alpha * np.cos(theta)

    def point(self, theta, q=0.0) -> LayerPoint:
        """Build a validated :class:`LayerPoint` for this torus.

        Raises DomainError if a+q <= 0 or R+(a+q)cos(theta) <= 0 anywhere.
        """
        theta = np.asarray(theta, dtype=float) if np.ndim(theta) else float(theta)
        q = np.asarray(q, dtype=float) if np.ndim(q) else float(q)
        a_q = self.a + q
        F_q = self.R + a_q * np.cos(theta)
        if np.any(a_q <= 0) or np.any(F_q <= 0):
            raise DomainError(
                f"point outside the coordinate patch of torus R={self.R}, a={self.a}"
            )
        return LayerPoint(theta, q)


class LayerPoint(NamedTuple):
    """(theta, q). Use :meth:`TorusGeometry.point` to get a checked one."""

    theta: float | np.ndarray
    q: float | np.ndarray = 0.0


class MetricFactors(NamedTuple):
    a_q: float | np.ndarray
    F_q: float | np.ndarray


class CurvaturePair(NamedTuple):
    h: float | np.ndarray
    k: float | np.ndarray


def metric_factors(geom: TorusGeometry, p: LayerPoint) -> MetricFactors:
    """a_q = a + q and F_q = R + (a+q) cos(theta)."""
    a_q = geom.a + p.q
    return MetricFactors(a_q, geom.R + a_q * np.cos(p.theta))


def curvatures(geom: TorusGeometry, p: LayerPoint) -> CurvaturePair:
    """Mean and Gaussian curvature of the parallel surface at offset q.

    h = (1/a_q + cos(theta)/F_q) / 2 and k = cos(theta) / (a_q F_q).
    """
    a_q, F_q = metric_factors(geom, p)
    c = np.cos(p.theta)
    return CurvaturePair(0.5 * (1.0 / a_q + c / F_q), c / (a_q * F_q))


def curvature_potential(geom: TorusGeometry, theta):
    """V_C = -1 / (8 a^2 F^2), strictly negative."""
    F = geom.F(theta)
    return -1.0 / (8.0 * geom.a**2 * F**2)


def measure(geom: TorusGeometry, p: LayerPoint):
    """Volume density M(theta, q) = a_q F_q; M(theta, 0) is the area density."""
    a_q, F_q = metric_factors(geom, p)
    return a_q * F_q


def rescale_factor_W(geom: TorusGeometry, p: LayerPoint):
    """W = 1 + 2 q h0 + q^2 k0 with h0, k0 the q = 0 curvatures.

    Using surface curvatures makes M(theta, q) = M(theta, 0) * W exact.
    """
    h0, k0 = curvatures(geom, LayerPoint(p.theta, 0.0))
    return 1.0 + 2.0 * p.q * h0 + p.q**2 * k0
