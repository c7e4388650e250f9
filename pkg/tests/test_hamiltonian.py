import math

import numpy as np
import pytest

from toruslayer.basis import (
    BasisFunction,
    BasisSpec,
    Confinement,
    Model,
    QFactor,
    ThetaFactor,
    build_basis,
)
from toruslayer.errors import AsymmetryError
from toruslayer.geometry import TorusGeometry, curvature_potential, curvatures
from toruslayer.hamiltonian import ModelOperator, apply_layer, apply_surface, assemble
from toruslayer.linalg import generalized_eigen_oracle, symmetric_eigen
from toruslayer.quadrature import gauss_legendre, periodic_trapezoid, product_grid, surface_grid
from toruslayer.spectra import SolveConfig, build_grid


def metric_laplacian(geom, f, theta, q, m, h=1e-3):
    """Divergence-form Laplacian from the metric alone, nested central differences."""
    a, R = geom.a, geom.R

    def sqrt_g(t, s):
        return (a + s) * (R + (a + s) * math.cos(t))

    def theta_flux(t, s):
        return sqrt_g(t, s) / (a + s) ** 2

    psi = lambda t, s: f(t, s)
    t, s = theta, q
    d_theta = (
        theta_flux(t + h / 2, s) * (psi(t + h, s) - psi(t, s))
        - theta_flux(t - h / 2, s) * (psi(t, s) - psi(t - h, s))
    ) / h**2
    d_q = (
        sqrt_g(t, s + h / 2) * (psi(t, s + h) - psi(t, s))
        - sqrt_g(t, s - h / 2) * (psi(t, s) - psi(t, s - h))
    ) / h**2
    F_q = R + (a + s) * math.cos(t)
    return (d_theta + d_q) / sqrt_g(t, s) - m**2 / F_q**2 * psi(t, s)


@pytest.mark.parametrize("m", [0, 1, 3])
@pytest.mark.parametrize(
    "conf",
    [Confinement.hardwall(25.0), Confinement.hardwall(10.0, offset=True), Confinement.oscillator(0.05)],
    ids=["centered", "offset", "oscillator"],
)
def test_apply_layer_matches_metric_laplacian(geom, conf, m):
    op = ModelOperator(Model.LAYER, geom, conf, m)
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=3, n_q=2), conf)
    lo, hi = conf.q_interval(geom)
    rng = np.random.default_rng(11)
    for f in basis:
        for theta, q in zip(rng.uniform(0, 2 * np.pi, 3), rng.uniform(0.8 * lo, 0.8 * hi, 3)):
            expected = -0.5 * metric_laplacian(geom, f, theta, q, m) + conf.potential(q) * f(theta, q)
            got = apply_layer(op, f, theta, q)
            scale = abs(f(theta, q)) * conf.ground_energy + 1e-12
            assert got == pytest.approx(expected, abs=1e-5 * scale + 1e-6 * abs(expected))


def test_apply_layer_normal_ground_factor(geom):
    L = 25.0
    conf = Confinement.hardwall(L)
    op = ModelOperator(Model.LAYER, geom, conf)
    f = build_basis(BasisSpec(Model.LAYER, n_theta=1, n_q=1), conf)[0]
    theta = np.linspace(0, 2 * np.pi, 5)[:, None]
    q = np.linspace(-12.5, 12.5, 7)[None, :]
    h = curvatures(geom, geom.point(theta, q)).h
    expected = math.pi / L * h * np.sin(math.pi * q / L) + math.pi**2 / (2 * L**2) * np.cos(math.pi * q / L)
    np.testing.assert_allclose(apply_layer(op, f, theta, q), expected, rtol=1e-13, atol=1e-19)


def test_apply_layer_constant_is_annihilated(geom):
    op = ModelOperator(Model.LAYER, geom, Confinement.hardwall(25.0))
    one = BasisFunction(QFactor(0, None), ThetaFactor(0))
    assert np.all(apply_layer(op, one, np.linspace(0, 6, 5), 3.0) == 0)


def test_apply_layer_gaussian_at_origin(geom):
    omega = 0.1
    conf = Confinement.oscillator(omega, exponent="paper")
    op = ModelOperator(Model.LAYER, geom, conf)
    f = build_basis(BasisSpec(Model.LAYER, n_theta=1, n_q=1), conf)[0]
    np.testing.assert_allclose(apply_layer(op, f, np.array([0.0, 1.0, 3.0]), 0.0), omega, rtol=1e-14)


def test_apply_surface_examples(geom):
    theta = np.linspace(0, 2 * np.pi, 9)
    one = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=1))[0]
    bare = ModelOperator(Model.SURFACE_BARE, geom)
    assert np.all(apply_surface(bare, one, theta) == 0)

    flat = TorusGeometry(1e12, 1.0)
    hc = ModelOperator(Model.SURFACE_HARD_CONSTRAINT, flat)
    np.testing.assert_allclose(apply_surface(hc, one, theta), -0.25, rtol=1e-11)
    flat_bare = ModelOperator(Model.SURFACE_BARE, flat)
    for f in build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=4)):
        np.testing.assert_allclose(apply_surface(flat_bare, f, theta), f.n**2 * f(theta), atol=1e-10)


def test_model_contracts(geom):
    f = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=1))[0]
    with pytest.raises(TypeError):
        apply_layer(ModelOperator(Model.SURFACE_BARE, geom), f, 0.0, 0.0)
    with pytest.raises(TypeError):
        apply_surface(ModelOperator(Model.LAYER, geom, Confinement.hardwall(5.0)), f, 0.0)
    with pytest.raises(ValueError):
        ModelOperator(Model.LAYER, geom)


def test_assemble_flat_bare_ring():
    flat = TorusGeometry(1e12, 1.0)
    basis = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=3))
    grid = surface_grid(flat, periodic_trapezoid(64))
    H, S, asym = assemble(ModelOperator(Model.SURFACE_BARE, flat), basis, grid)
    scale = np.max(np.abs(S))
    np.testing.assert_allclose(H, np.diag([0, 1, 4]) * np.diag(S), atol=1e-10 * scale)
    np.testing.assert_allclose(S, np.diag(np.diag(S)), atol=1e-10 * scale)


def test_layer_assembly_is_self_adjoint(geom):
    cfg = SolveConfig(geom, BasisSpec(Model.LAYER), Confinement.hardwall(25.0), table_reproduction=True)
    op = ModelOperator(Model.LAYER, geom, cfg.conf)
    _, _, asym = assemble(op, build_basis(cfg.spec, cfg.conf), build_grid(cfg))
    assert asym < 1e-8


@pytest.mark.parametrize("m", [1, 2])
def test_layer_assembly_self_adjoint_nonzero_m(geom, m):
    conf = Confinement.oscillator(0.1)
    cfg = SolveConfig(geom, BasisSpec(Model.LAYER, n_theta=4, n_q=2, m=m), conf)
    op = ModelOperator(Model.LAYER, geom, conf, m)
    _, _, asym = assemble(op, build_basis(cfg.spec, conf), build_grid(cfg))
    assert asym < 1e-8


def test_asymmetry_guard(geom):
    # walls placed inside the grid interval break the boundary terms
    conf = Confinement.hardwall(25.0)
    grid = product_grid(geom, periodic_trapezoid(32), gauss_legendre(40, -20.0, 20.0))
    basis = build_basis(BasisSpec(Model.LAYER), conf)
    with pytest.raises(AsymmetryError):
        assemble(ModelOperator(Model.LAYER, geom, conf), basis, grid)


def test_hard_constraint_minus_bare_is_curvature_potential(geom):
    basis = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=5))
    grid = surface_grid(geom, periodic_trapezoid(64))
    H_C = assemble(ModelOperator(Model.SURFACE_HARD_CONSTRAINT, geom), basis, grid).H
    H_0 = assemble(ModelOperator(Model.SURFACE_BARE, geom), basis, grid).H
    potential = 2 * geom.a**2 * curvature_potential(geom, grid.theta)
    V = np.array([[np.sum(grid.weights * f(grid.theta) * potential * g(grid.theta)) for g in basis] for f in basis])
    np.testing.assert_allclose(H_C - H_0, V, atol=1e-12 * np.max(np.abs(H_C)))


def _parity_check(op, even, odd, grid):
    H, S, _ = assemble(op, even, grid)
    ev_even = generalized_eigen_oracle(H, S)
    H2, S2, _ = assemble(op, even + odd, grid)
    ev_all = generalized_eigen_oracle(H2, S2)
    # each even eigenvalue reappears in the mixed spectrum
    for e in ev_even:
        assert np.min(np.abs(ev_all - e)) < 1e-10 * max(1.0, abs(e))
    # and the mixed matrix has no even-odd coupling
    n = len(even)
    assert np.max(np.abs(H2[:n, n:])) < 1e-12 * np.max(np.abs(H2))
    assert np.max(np.abs(S2[:n, n:])) < 1e-12 * np.max(np.abs(S2))


def test_parity_decoupling_surface(geom):
    grid = surface_grid(geom, periodic_trapezoid(64))
    even = build_basis(BasisSpec(Model.SURFACE_HARD_CONSTRAINT, n_theta=4))
    odd = build_basis(BasisSpec(Model.SURFACE_HARD_CONSTRAINT, n_theta=3, parity="odd"))
    _parity_check(ModelOperator(Model.SURFACE_HARD_CONSTRAINT, geom), even, odd, grid)


def test_parity_decoupling_layer(geom):
    conf = Confinement.hardwall(25.0)
    cfg = SolveConfig(geom, BasisSpec(Model.LAYER), conf)
    grid = build_grid(cfg)
    even = build_basis(BasisSpec(Model.LAYER, n_theta=3, n_q=2), conf)
    odd = build_basis(BasisSpec(Model.LAYER, n_theta=2, n_q=2, parity="odd"), conf)
    op = ModelOperator(Model.LAYER, geom, conf)
    H, S, _ = assemble(op, even, grid)
    H2, S2, _ = assemble(op, even + odd, grid)
    ev_even = generalized_eigen_oracle(H, S)
    ev_all = generalized_eigen_oracle(H2, S2)
    beta = lambda e: 2 * geom.a**2 * e
    for e in ev_even:
        assert np.min(np.abs(beta(ev_all) - beta(e))) < 1e-10


def test_grid_model_mismatch(geom):
    basis = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=2))
    grid = product_grid(geom, periodic_trapezoid(8), gauss_legendre(4, -1, 1))
    with pytest.raises(ValueError):
        assemble(ModelOperator(Model.SURFACE_BARE, geom), basis, grid)


def test_jacobi_on_projected_layer_matrix(geom):
    conf = Confinement.hardwall(25.0)
    cfg = SolveConfig(geom, BasisSpec(Model.LAYER), conf)
    op = ModelOperator(Model.LAYER, geom, conf)
    H, S, _ = assemble(op, build_basis(cfg.spec, conf), build_grid(cfg))
    # plain symmetric matrix check: S itself
    vals = symmetric_eigen(S).values
    np.testing.assert_allclose(vals, np.linalg.eigvalsh(S), rtol=1e-12)
