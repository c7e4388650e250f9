"""End-to-end Rayleigh-Ritz pipeline and result post-processing."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field

import numpy as np

from toruslayer.basis import BasisFunction, BasisSpec, Confinement, Model, build_basis
from toruslayer.errors import ConventionError, NumericalError
from toruslayer.geometry import TorusGeometry
from toruslayer.hamiltonian import ModelOperator, assemble
from toruslayer.linalg import (
    generalized_eigen_oracle,
    orthonormalize,
    overlap_matrix,
    symmetric_eigen,
)
from toruslayer.quadrature import (
    ProductGrid,
    gauss_legendre,
    periodic_trapezoid,
    product_grid,
    surface_grid,
)

log = logging.getLogger(__name__)

TABLE_BASIS = dict(n_theta=3, n_q=2, m=0, parity="even", theta_modes=None)


@dataclass(frozen=True)
class SolveConfig:
    """Everything a solve depends on.

    ``table_reproduction`` pins the basis to three cos(n theta) functions,
    two q functions, m = 0, even parity.
    """

    geom: TorusGeometry
    spec: BasisSpec = field(default_factory=BasisSpec)
    conf: Confinement | None = None
    n_theta_quad: int = 64
    n_q_quad: int = 40
    sigma_multiple: float = 6.0
    table_reproduction: bool = False

    def __post_init__(self):
        if self.table_reproduction:
            object.__setattr__(self, "spec", dataclasses.replace(self.spec, **TABLE_BASIS))
        if self.spec.model is Model.LAYER and self.conf is None:
            raise ValueError("layer model needs a confinement")
        if self.n_theta_quad < 1 or self.n_q_quad < 1:
            raise ValueError("quadrature counts must be positive")
        if not self.sigma_multiple > 0:
            raise ValueError("sigma_multiple must be positive")

    @property
    def model(self) -> Model:
        return self.spec.model

    def replace(self, **changes) -> SolveConfig:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        """Flat, fully resolved view (config-file keys)."""
        conf = self.conf
        return {
            "geometry.R_angstrom": self.geom.R,
            "geometry.a_angstrom": self.geom.a,
            "model": self.model.value,
            "confinement.kind": conf.kind.value if conf else None,
            "confinement.L_angstrom": conf.L if conf else None,
            "confinement.omega_inv_ang2": conf.omega if conf else None,
            "confinement.oscillator_exponent": conf.oscillator_exponent if conf else None,
            "basis.n_theta": self.spec.n_theta,
            "basis.n_q": self.spec.q_count,
            "basis.m": self.spec.m,
            "basis.parity": self.spec.parity,
            "quadrature.n_theta": self.n_theta_quad,
            "quadrature.n_q": self.n_q_quad,
            "quadrature.sigma_multiple": self.sigma_multiple,
            "mode.table_reproduction": self.table_reproduction,
        }


@dataclass
class SpectralResult:
    """Eigenpairs sorted by ascending energy.

    ``coefficients[i]`` expands state i over the raw basis and is normalized
    to unit norm under the M-weighted measure (phi integral included).
    """

    config: SolveConfig
    basis: list[BasisFunction]
    energies: np.ndarray
    betas: np.ndarray
    coefficients: np.ndarray
    q_sectors: np.ndarray
    norm_residuals: np.ndarray
    H: np.ndarray
    S: np.ndarray
    diagnostics: dict

    def sector(self, j=0) -> np.ndarray:
        """Indices of the states whose dominant q content is factor j."""
        return np.flatnonzero(self.q_sectors == j)

    def sector_betas(self, j=0) -> np.ndarray:
        return self.betas[self.sector(j)]

    def state(self, k, j=0) -> int:
        """Global index of the k-th state in q-sector j."""
        idx = self.sector(j)
        if k >= len(idx):
            raise IndexError(f"q-sector {j} holds only {len(idx)} states")
        return int(idx[k])

    def wavefunction(self, state_index, theta, q=0.0):
        c = self.coefficients[state_index]
        return sum(ci * f(theta, q) for ci, f in zip(c, self.basis))


def build_grid(cfg: SolveConfig) -> ProductGrid:
    theta_grid = periodic_trapezoid(cfg.n_theta_quad)
    if cfg.model.is_surface:
        return surface_grid(cfg.geom, theta_grid)
    lo, hi = cfg.conf.q_interval(cfg.geom, cfg.sigma_multiple)
    return product_grid(cfg.geom, theta_grid, gauss_legendre(cfg.n_q_quad, lo, hi))


def beta_from_energy(E, cfg: SolveConfig):
    """beta = 2 a^2 (E - E_n) with E_n the normal-mode ground energy."""
    if cfg.model.is_surface:
        raise ValueError("surface models produce beta directly")
    return 2.0 * cfg.geom.a**2 * (np.asarray(E) - cfg.conf.ground_energy)


def normalize_state(coeffs, basis=None, grid=None, overlap=None):
    """Scale ``coeffs`` so that the M-weighted norm of the state is 1.

    Pass either ``basis`` and ``grid`` or a precomputed ``overlap`` matrix.
    Returns (scaled coefficients, |norm - 1| after scaling).
    """
    if overlap is None:
        if basis is None or grid is None:
            raise ValueError("need basis and grid, or overlap")
        overlap = overlap_matrix(basis, grid)
    c = np.asarray(coeffs, dtype=float)
    norm2 = float(c @ overlap @ c)
    if not norm2 > 0:
        raise NumericalError("cannot normalize a zero-norm state")
    c = c / np.sqrt(norm2)
    return c, abs(float(c @ overlap @ c) - 1.0)


def _q_sectors(coeffs, basis, S):
    js = np.array([f.j for f in basis])
    mass = coeffs**2 * np.diag(S)[None, :]
    per_j = np.stack([mass[:, js == j].sum(axis=1) for j in range(js.max() + 1)], axis=1)
    return np.argmax(per_j, axis=1)


def solve(cfg: SolveConfig) -> SpectralResult:
    """grid -> basis -> assemble -> Gram-Schmidt -> Jacobi -> beta, normalized states."""
    grid = build_grid(cfg)
    basis = build_basis(cfg.spec, cfg.conf)
    op = ModelOperator(cfg.model, cfg.geom, cfg.conf, cfg.spec.m)
    H, S, asymmetry = assemble(op, basis, grid)
    ortho = orthonormalize(S)
    C = ortho.C
    Hp = C @ H @ C.T
    Hp = 0.5 * (Hp + Hp.T)
    eig = symmetric_eigen(Hp)
    raw = (C.T @ eig.vectors).T

    coeffs = np.empty_like(raw)
    residuals = np.empty(len(raw))
    diag_norm = np.sqrt(np.diag(S))
    for i, c in enumerate(raw):
        c, residuals[i] = normalize_state(c, overlap=S)
        # sign: dominant (norm-weighted) component positive
        if c[np.argmax(np.abs(c) * diag_norm)] < 0:
            c = -c
        coeffs[i] = c

    lam = eig.values
    if cfg.model.is_surface:
        betas = lam.copy()
        energies = lam / (2.0 * cfg.geom.a**2)
    else:
        energies = lam.copy()
        betas = beta_from_energy(lam, cfg)

    oracle = generalized_eigen_oracle(H, S)
    diagnostics = {
        "asymmetry": asymmetry,
        "gram_condition": ortho.gram_condition,
        "oracle_max_deviation": float(np.max(np.abs(oracle - lam))),
        "max_norm_residual": float(residuals.max()),
    }
    return SpectralResult(
        config=cfg,
        basis=basis,
        energies=energies,
        betas=betas,
        coefficients=coeffs,
        q_sectors=_q_sectors(coeffs, basis, S),
        norm_residuals=residuals,
        H=H,
        S=S,
        diagnostics=diagnostics,
    )


CONVENTIONS = {"constant_term": 0, "cos_theta_term": 1}


def format_coefficients(result: SpectralResult, state_index: int, convention="constant_term"):
    """Theta-series coefficients of the state's leading q-factor, divided by a reference.

    ``constant_term`` divides by the n = 0 coefficient, ``cos_theta_term``
    by the n = 1 coefficient. Returns (modes, ratios). Raises ConventionError
    if the reference coefficient is absent or below 1e-12 of the largest one.
    """
    try:
        ref_mode = CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown convention {convention!r}") from None
    j = int(result.q_sectors[state_index])
    c = result.coefficients[state_index]
    sel = [i for i, f in enumerate(result.basis) if f.j == j]
    modes = np.array([result.basis[i].n for i in sel])
    series = c[sel]
    hits = np.flatnonzero(modes == ref_mode)
    if len(hits) == 0:
        raise ConventionError(f"basis has no n={ref_mode} term for convention {convention!r}")
    ref = series[hits[0]]
    if abs(ref) < 1e-12 * np.max(np.abs(series)):
        raise ConventionError(f"reference coefficient for {convention!r} vanishes")
    return modes, series / ref


def series_string(modes, ratios, q_label="", parity="even", cutoff=5e-5, digits=4) -> str:
    """Human-readable series such as ``(1 - 0.3676 cos t + 0.0693 cos 2t) cos(pi q/25)``.

    Terms with |ratio| < ``cutoff`` are omitted from the string only.
    """
    fn = "cos" if parity == "even" else "sin"
    out = []
    for n, r in zip(modes, ratios):
        if abs(r) < cutoff:
            continue
        if n == 0:
            body = f"{abs(r):.{digits}f}"
        else:
            coef = "" if abs(abs(r) - 1.0) < 10**-digits else f"{abs(r):.{digits}f} "
            body = f"{coef}{fn} {'' if n == 1 else n}t"
        if abs(abs(r) - 1.0) < 10**-digits and n == 0:
            body = "1"
        sign = "-" if r < 0 else "+"
        out.append((sign, body))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    if q_label:
        return f"({text}) {q_label}"
    return text
