"""Variational spectra of a particle confined near a toroidal surface.

Three models are solved with the same machinery:

* ``layer`` -- full 3D Laplacian in a thin shell of normal width set by a
  confining potential V_n(q) (hard walls or a harmonic well),
* ``surface_hard_constraint`` -- the q -> 0 surface equation including the
  curvature potential V_C,
* ``surface_bare`` -- the surface equation with V_C omitted.
"""

from toruslayer.errors import (
    AsymmetryError,
    ConfigError,
    ConventionError,
    ConvergenceError,
    DomainError,
    IllConditionedError,
    LinearDependenceError,
    NumericalError,
)
from toruslayer.geometry import LayerPoint, TorusGeometry
from toruslayer.basis import BasisSpec, Confinement
from toruslayer.spectra import SolveConfig, SpectralResult, solve

__version__ = "0.1.0"

__all__ = [
    "AsymmetryError",
    "BasisSpec",
    "ConfigError",
    "Confinement",
    "ConventionError",
    "ConvergenceError",
    "DomainError",
    "IllConditionedError",
    "LayerPoint",
    "LinearDependenceError",
    "NumericalError",
    "SolveConfig",
    "SpectralResult",
    "TorusGeometry",
    "solve",
]
