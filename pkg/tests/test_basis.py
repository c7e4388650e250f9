import math

import numpy as np
import pytest

from toruslayer.basis import (
    BasisSpec,
    Confinement,
    ConfinementKind,
    Model,
    build_basis,
    eval_derivatives,
)

CONFINEMENTS = [
    Confinement.hardwall(25.0),
    Confinement.hardwall(10.0, offset=True),
    Confinement.oscillator(0.1),
    Confinement.oscillator(0.05, exponent="paper"),
]


def test_layer_centered_basis_layout():
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=3, n_q=2), Confinement.hardwall(25.0))
    assert len(basis) == 6
    assert [f.labels for f in basis] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    q = np.linspace(-12.5, 12.5, 7)
    theta = 0.7
    np.testing.assert_allclose(basis[0](theta, q), np.cos(math.pi * q / 25), atol=1e-15)
    np.testing.assert_allclose(basis[3](theta, q), np.sin(2 * math.pi * q / 25), atol=1e-15)
    np.testing.assert_allclose(basis[4](theta, q), np.sin(2 * math.pi * q / 25) * math.cos(theta), atol=1e-15)


def test_surface_bare_basis():
    basis = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=3))
    theta = np.linspace(0, 2 * np.pi, 5)
    assert len(basis) == 3
    for n, f in enumerate(basis):
        np.testing.assert_allclose(f(theta, 0.0), np.cos(n * theta), atol=1e-15)
        # no q dependence
        np.testing.assert_array_equal(f(theta, 3.0), f(theta, 0.0))


def test_oscillator_second_factor_vanishes_at_origin():
    basis = build_basis(BasisSpec(Model.LAYER, n_q=2), Confinement.oscillator(0.1))
    assert basis[3](0.4, 0.0) == 0.0


def test_oscillator_factors():
    omega = 0.1
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=1, n_q=3), Confinement.oscillator(omega))
    q = np.linspace(-5, 5, 11)
    g = np.exp(-omega * q * q / 2)
    x = math.sqrt(omega) * q
    np.testing.assert_allclose(basis[0](0.0, q), g, rtol=1e-15)
    np.testing.assert_allclose(basis[1](0.0, q), g * 2 * x, rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(basis[2](0.0, q), g * (4 * x * x - 2), rtol=1e-14, atol=1e-15)


def test_paper_exponent_option():
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=1, n_q=1), Confinement.oscillator(0.05, "paper"))
    assert basis[0](0.0, 2.0) == pytest.approx(math.exp(-0.05 * 4.0), rel=1e-15)


def test_centered_ladder_beyond_two():
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=1, n_q=4), Confinement.hardwall(10.0))
    q = 1.3
    expected = [math.cos(math.pi * q / 10), math.sin(2 * math.pi * q / 10),
                math.cos(3 * math.pi * q / 10), math.sin(4 * math.pi * q / 10)]
    np.testing.assert_allclose([f(0.0, q) for f in basis], expected, rtol=1e-14)


def test_derivative_examples():
    L = 25.0
    f = build_basis(BasisSpec(Model.LAYER, n_theta=2, n_q=1), Confinement.hardwall(L))[1]
    d = eval_derivatives(f, 0.0, 0.0)
    assert d == pytest.approx((1.0, 0.0, -1.0, 0.0, -math.pi**2 / L**2), abs=1e-16)

    const = build_basis(BasisSpec(Model.SURFACE_BARE, n_theta=1))[0]
    d = eval_derivatives(const, 1.1, 0.0)
    assert (d.value, d.f_theta, d.f_thetatheta) == (1.0, 0.0, 0.0)

    omega = 0.1
    gauss = build_basis(BasisSpec(Model.LAYER, n_theta=1, n_q=1), Confinement.oscillator(omega, "paper"))[0]
    d = eval_derivatives(gauss, 0.3, 0.0)
    assert d.f_q == 0.0
    assert d.f_qq == pytest.approx(-2 * omega, rel=1e-15)


def _fd(fun, x, h):
    return (fun(x + h) - fun(x - h)) / (2 * h), (fun(x + h) - 2 * fun(x) + fun(x - h)) / (h * h)


@pytest.mark.parametrize("conf", CONFINEMENTS, ids=lambda c: f"{c.kind.value}-{c.L or c.omega}")
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_derivatives_match_finite_differences(conf, parity):
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=3, n_q=3, parity=parity), conf)
    lo, hi = conf.q_interval()
    rng = np.random.default_rng(7)
    h = 1e-4
    for f in basis:
        for theta, q in zip(rng.uniform(0, 2 * np.pi, 5), rng.uniform(lo * 0.9, hi * 0.9, 5)):
            d = eval_derivatives(f, theta, q)
            ft, ftt = _fd(lambda t: f(t, q), theta, h)
            fq, fqq = _fd(lambda s: f(theta, s), q, h)
            # second differences lose ~eps/h^2 absolute accuracy
            scale = max(abs(d.value), 1.0)
            assert d.f_theta == pytest.approx(ft, rel=1e-6, abs=1e-8 * scale)
            assert d.f_thetatheta == pytest.approx(ftt, rel=1e-6, abs=1e-6 * scale)
            assert d.f_q == pytest.approx(fq, rel=1e-6, abs=1e-8 * scale)
            assert d.f_qq == pytest.approx(fqq, rel=1e-6, abs=1e-6 * scale)


@pytest.mark.parametrize("conf", CONFINEMENTS[:2], ids=["centered", "offset"])
def test_hardwall_functions_vanish_at_walls(conf):
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=3, n_q=4), conf)
    lo, hi = conf.q_interval()
    theta = np.linspace(0, 2 * np.pi, 9)
    for f in basis:
        assert np.max(np.abs(f(theta, lo))) < 1e-14
        assert np.max(np.abs(f(theta, hi))) < 1e-14


@pytest.mark.parametrize("parity, sign", [("even", 1), ("odd", -1)])
def test_parity(parity, sign):
    basis = build_basis(BasisSpec(Model.LAYER, n_theta=4, n_q=2, parity=parity), Confinement.hardwall(25.0))
    theta = np.linspace(0.1, 3.0, 7)
    for f in basis:
        np.testing.assert_array_equal(f(-theta, 2.0), sign * f(theta, 2.0))


def test_odd_sector_starts_at_one():
    spec = BasisSpec(Model.SURFACE_BARE, n_theta=3, parity="odd")
    assert spec.modes == (1, 2, 3)
    with pytest.raises(ValueError, match="n = 1"):
        BasisSpec(Model.SURFACE_BARE, parity="odd", theta_modes=(0, 1, 2))


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_theta=0), dict(model=Model.LAYER, n_q=0), dict(parity="mixed"), dict(m=0.5)],
)
def test_basis_spec_validation(kwargs):
    with pytest.raises(ValueError):
        BasisSpec(**kwargs)


def test_confinement_validation():
    with pytest.raises(ValueError):
        Confinement("box", L=3.0)
    with pytest.raises(ValueError):
        Confinement.hardwall(0.0)
    with pytest.raises(ValueError):
        Confinement.oscillator(-0.1)
    with pytest.raises(ValueError):
        Confinement.oscillator(0.1, exponent="weird")


def test_layer_basis_needs_confinement():
    with pytest.raises(ValueError):
        build_basis(BasisSpec(Model.LAYER))


def test_confinement_intervals_and_energies():
    assert Confinement.hardwall(25.0).q_interval() == (-12.5, 12.5)
    assert Confinement.hardwall(25.0, offset=True).q_interval() == (0.0, 25.0)
    lo, hi = Confinement.oscillator(0.05).q_interval()
    assert hi == pytest.approx(6 / math.sqrt(0.1)) and lo == -hi
    assert Confinement.hardwall(25.0).ground_energy == pytest.approx(math.pi**2 / 1250)
    assert Confinement.oscillator(0.1).ground_energy == pytest.approx(0.05)
    assert Confinement.oscillator(0.1).kind is ConfinementKind.OSCILLATOR
