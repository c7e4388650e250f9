"""Pointwise action of the three model operators and matrix assembly.

Layer (eigenvalue E in 1/angstrom^2)::

    H_q f = -1/2 [ f_tt / a_q^2 - sin(t) f_t / (a_q F_q) - m^2 f / F_q^2
                   + 2 h f_q + f_qq ] + V_n(q) f

Surface (dimensionless eigenvalue beta = 2 E a^2)::

    H_C f = -f_tt + alpha sin(t) f_t / F + (m^2 alpha^2 - 1/4) f / F^2
    H_0 f = -f_tt + alpha sin(t) f_t / F + m^2 alpha^2 f / F^2

The azimuthal factor exp(i m phi) is handled analytically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from toruslayer.basis import BasisFunction, Confinement, Model, eval_derivatives
from toruslayer.errors import AsymmetryError
from toruslayer.geometry import LayerPoint, TorusGeometry, curvatures, metric_factors
from toruslayer.linalg import overlap_from_samples, sample_basis
from toruslayer.quadrature import ProductGrid

log = logging.getLogger(__name__)

MAX_ASYMMETRY = 1e-6


@dataclass(frozen=True)
class ModelOperator:
    model: Model
    geom: TorusGeometry
    conf: Confinement | None = None
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.model is Model.LAYER and self.conf is None:
            raise ValueError("layer operator needs a confinement")


class Assembly(NamedTuple):
    H: np.ndarray
    S: np.ndarray
    asymmetry: float


def apply_layer(op: ModelOperator, f: BasisFunction, theta, q):
    """(H_q f)(theta, q) in 1/angstrom^2."""
    if op.model is not Model.LAYER:
        raise TypeError(f"apply_layer needs the layer model, got {op.model.value}")
    d = eval_derivatives(f, theta, q)
    p = LayerPoint(theta, q)
    a_q, F_q = metric_factors(op.geom, p)
    h = curvatures(op.geom, p).h
    lap = (
        d.f_thetatheta / a_q**2
        - np.sin(theta) / (a_q * F_q) * d.f_theta
        - op.m**2 / F_q**2 * d.value
        + 2.0 * h * d.f_q
        + d.f_qq
    )
    return -0.5 * lap + op.conf.potential(q) * d.value


def apply_surface(op: ModelOperator, f: BasisFunction, theta):
    """Dimensionless surface operator (H_C or H_0) applied to a theta-only function."""
    if op.model is Model.LAYER:
        raise TypeError("apply_surface needs a surface model, got layer")
    d = eval_derivatives(f, theta, 0.0)
    alpha = op.geom.alpha
    F = op.geom.F(theta)
    centrifugal = op.m**2 * alpha**2
    if op.model is Model.SURFACE_HARD_CONSTRAINT:
        centrifugal = centrifugal - 0.25
    return -d.f_thetatheta + alpha * np.sin(theta) / F * d.f_theta + centrifugal / F**2 * d.value


def apply(op: ModelOperator, f: BasisFunction, theta, q=0.0):
    if op.model is Model.LAYER:
        return apply_layer(op, f, theta, q)
    return apply_surface(op, f, theta)


def assemble(
    op: ModelOperator,
    basis: list[BasisFunction],
    grid: ProductGrid,
    max_asymmetry: float = MAX_ASYMMETRY,
) -> Assembly:
    """Overlap S and symmetrized Hamiltonian H = (H_raw + H_raw^T)/2.

    H_raw[r, s] = <Phi_r, Op Phi_s>, with the operator applied analytically to
    the ket. ``asymmetry`` = ||H_raw - H_raw^T||_F / ||H_raw||_F; values above
    ``max_asymmetry`` mean the quadrature or boundary conditions are off and
    raise AsymmetryError.
    """
    if not basis:
        raise ValueError("empty basis")
    if grid.is_surface != op.model.is_surface:
        raise ValueError("grid and model disagree about the q degree of freedom")
    theta, q = grid.theta, grid.q
    kets = sample_basis(basis, grid)
    applied = np.array([apply(op, f, theta, q) for f in basis])
    w = grid.weights
    n = len(basis)
    H_raw = np.empty((n, n))
    for r in range(n):
        for s in range(n):
            H_raw[r, s] = np.sum(w * (kets[r] * applied[s]))
    S = overlap_from_samples(kets, grid)
    norm = np.linalg.norm(H_raw)
    asymmetry = float(np.linalg.norm(H_raw - H_raw.T) / norm) if norm > 0 else 0.0
    if asymmetry > max_asymmetry:
        raise AsymmetryError(
            f"Hamiltonian asymmetry {asymmetry:.3e} exceeds {max_asymmetry:.0e}; "
            "raise the quadrature resolution or check the confinement interval"
        )
    if asymmetry > 1e-8:
        log.warning("Hamiltonian asymmetry %.3e", asymmetry)
    return Assembly(0.5 * (H_raw + H_raw.T), S, asymmetry)
