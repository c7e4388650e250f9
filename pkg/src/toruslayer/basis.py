"""Trial functions Phi_jn(theta, q) = Q_j(q) T_n(theta) with analytic derivatives.

Theta factors are cos(n theta) (even parity) or sin(n theta) (odd parity).
The q factors depend on the normal confinement:

=================  ==========================================  ===========
kind               ladder Q_0, Q_1, Q_2, ...                    q interval
=================  ==========================================  ===========
hardwall_centered  cos(pi q/L), sin(2 pi q/L), cos(3 pi q/L)..  [-L/2, L/2]
hardwall_offset    sin(pi q/L), sin(2 pi q/L), sin(3 pi q/L)..  [0, L]
oscillator         exp(-c q^2) H_j(sqrt(omega) q)                [-q_max, q_max]
=================  ==========================================  ===========

For the oscillator, c = omega/2 (``physical``, the true ground state of
omega^2 q^2 / 2) or c = omega (``paper``, the literal exponent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from numpy.polynomial import hermite as H

from toruslayer.geometry import TorusGeometry


class Model(str, Enum):
    LAYER = "layer"
    SURFACE_HARD_CONSTRAINT = "surface_hard_constraint"
    SURFACE_BARE = "surface_bare"

    @property
    def is_surface(self) -> bool:
        return self is not Model.LAYER


class ConfinementKind(str, Enum):
    HARDWALL_CENTERED = "hardwall_centered"
    HARDWALL_OFFSET = "hardwall_offset"
    OSCILLATOR = "oscillator"


OSCILLATOR_EXPONENTS = ("physical", "paper")


@dataclass(frozen=True)
class Confinement:
    """Normal-direction potential V_n(q).

    Hard walls are infinite; inside the box V_n = 0. The oscillator is
    V_n = omega^2 q^2 / 2 with ``omega`` in 1/angstrom^2.
    """

    kind: ConfinementKind
    L: float | None = None
    omega: float | None = None
    oscillator_exponent: str = "physical"

    def __post_init__(self):
        object.__setattr__(self, "kind", ConfinementKind(self.kind))
        if self.kind is ConfinementKind.OSCILLATOR:
            if self.omega is None or not self.omega > 0:
                raise ValueError(f"oscillator confinement needs omega > 0, got {self.omega}")
            if self.oscillator_exponent not in OSCILLATOR_EXPONENTS:
                raise ValueError(
                    f"oscillator_exponent must be one of {OSCILLATOR_EXPONENTS}, "
                    f"got {self.oscillator_exponent!r}"
                )
        elif self.L is None or not self.L > 0:
            raise ValueError(f"hard-wall confinement needs L > 0, got {self.L}")

    @classmethod
    def hardwall(cls, L, offset=False):
        kind = ConfinementKind.HARDWALL_OFFSET if offset else ConfinementKind.HARDWALL_CENTERED
        return cls(kind, L=L)

    @classmethod
    def oscillator(cls, omega, exponent="physical"):
        return cls(ConfinementKind.OSCILLATOR, omega=omega, oscillator_exponent=exponent)

    @property
    def is_hardwall(self) -> bool:
        return self.kind is not ConfinementKind.OSCILLATOR

    @property
    def ground_energy(self) -> float:
        """Normal-mode ground energy pi^2/(2L^2) or omega/2 (1/angstrom^2)."""
        if self.is_hardwall:
            return math.pi**2 / (2.0 * self.L**2)
        return 0.5 * self.omega

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        if self.is_hardwall:
            return np.zeros_like(q)
        return 0.5 * self.omega**2 * q * q

    def q_interval(self, geom: TorusGeometry | None = None, sigma_multiple: float = 6.0):
        """Integration interval in q.

        Oscillator: +-sigma_multiple / sqrt(2 omega), clipped so a + q stays
        positive when ``geom`` is given.
        """
        if self.kind is ConfinementKind.HARDWALL_CENTERED:
            return (-0.5 * self.L, 0.5 * self.L)
        if self.kind is ConfinementKind.HARDWALL_OFFSET:
            return (0.0, float(self.L))
        q_max = sigma_multiple / math.sqrt(2.0 * self.omega)
        if geom is not None:
            q_max = min(q_max, 0.999 * geom.a)
        return (-q_max, q_max)


@dataclass(frozen=True)
class BasisSpec:
    """Basis choice for one parity sector at fixed azimuthal number ``m``.

    ``theta_modes`` overrides the default mode list (0..n_theta-1 for even,
    1..n_theta for odd).
    """

    model: Model = Model.LAYER
    n_theta: int = 3
    n_q: int = 2
    m: int = 0
    parity: str = "even"
    theta_modes: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.n_theta < 1:
            raise ValueError(f"n_theta must be >= 1, got {self.n_theta}")
        if self.model is Model.LAYER and self.n_q < 1:
            raise ValueError(f"layer model needs n_q >= 1, got {self.n_q}")
        if int(self.m) != self.m:
            raise ValueError(f"azimuthal number must be an integer, got {self.m}")
        if self.theta_modes is not None:
            modes = tuple(int(n) for n in self.theta_modes)
            if not modes or any(n < 0 for n in modes) or len(set(modes)) != len(modes):
                raise ValueError(f"invalid theta_modes {self.theta_modes}")
            if self.parity == "odd" and 0 in modes:
                raise ValueError("odd parity sector starts at n = 1 (sin 0 = 0)")
            object.__setattr__(self, "theta_modes", modes)
            object.__setattr__(self, "n_theta", len(modes))

    @property
    def modes(self) -> tuple[int, ...]:
        if self.theta_modes is not None:
            return self.theta_modes
        start = 0 if self.parity == "even" else 1
        return tuple(range(start, start + self.n_theta))

    @property
    def q_count(self) -> int:
        return 1 if self.model.is_surface else self.n_q


class Derivatives(NamedTuple):
    value: np.ndarray
    f_theta: np.ndarray
    f_thetatheta: np.ndarray
    f_q: np.ndarray
    f_qq: np.ndarray


@dataclass(frozen=True)
class ThetaFactor:
    n: int
    parity: str = "even"

    def __call__(self, theta):
        """(T, T', T'')."""
        theta = np.asarray(theta, dtype=float)
        n = self.n
        c = np.cos(n * theta)
        s = np.sin(n * theta)
        if self.parity == "even":
            return c, -n * s, -n * n * c
        return s, n * c, -n * n * s

    def label(self):
        if self.n == 0:
            return "1"
        fn = "cos" if self.parity == "even" else "sin"
        return f"{fn}(theta)" if self.n == 1 else f"{fn}({self.n}theta)"


@dataclass(frozen=True)
class QFactor:
    """j-th normal factor for a given confinement (``conf=None``: constant 1)."""

    j: int
    conf: Confinement | None = None

    def __call__(self, q):
        """(Q, Q', Q'')."""
        q = np.asarray(q, dtype=float)
        conf = self.conf
        if conf is None:
            one = np.ones_like(q)
            return one, np.zeros_like(q), np.zeros_like(q)
        if conf.kind is ConfinementKind.OSCILLATOR:
            return self._oscillator(q)
        k = (self.j + 1) * math.pi / conf.L
        use_cos = conf.kind is ConfinementKind.HARDWALL_CENTERED and self.j % 2 == 0
        c = np.cos(k * q)
        s = np.sin(k * q)
        if use_cos:
            return c, -k * s, -k * k * c
        return s, k * c, -k * k * s

    def _oscillator(self, q):
        conf = self.conf
        j = self.j
        c = conf.omega if conf.oscillator_exponent == "paper" else 0.5 * conf.omega
        s = math.sqrt(conf.omega)
        x = s * q
        g = np.exp(-c * q * q)
        P = H.hermval(x, [0] * j + [1])
        # H_j' = 2 j H_{j-1}
        dP = s * 2 * j * H.hermval(x, [0] * (j - 1) + [1]) if j >= 1 else np.zeros_like(q)
        ddP = (
            s * s * 4 * j * (j - 1) * H.hermval(x, [0] * (j - 2) + [1])
            if j >= 2
            else np.zeros_like(q)
        )
        value = g * P
        d1 = g * (dP - 2 * c * q * P)
        d2 = g * (ddP - 4 * c * q * dP + (4 * c * c * q * q - 2 * c) * P)
        return value, d1, d2

    def label(self):
        conf = self.conf
        if conf is None:
            return ""
        if conf.kind is ConfinementKind.OSCILLATOR:
            c = conf.omega if conf.oscillator_exponent == "paper" else 0.5 * conf.omega
            herm = "" if self.j == 0 else f"H{self.j}(sqrt(w)q)"
            return f"exp(-{c:g}q^2){herm}"
        k = self.j + 1
        use_cos = conf.kind is ConfinementKind.HARDWALL_CENTERED and self.j % 2 == 0
        fn = "cos" if use_cos else "sin"
        num = "pi" if k == 1 else f"{k}pi"
        return f"{fn}({num} q/{conf.L:g})"


@dataclass(frozen=True)
class BasisFunction:
    """Separable trial function Q_j(q) * T_n(theta)."""

    q_factor: QFactor
    theta_factor: ThetaFactor
    labels: tuple[int, int] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", (self.q_factor.j, self.theta_factor.n))

    @property
    def j(self) -> int:
        return self.q_factor.j

    @property
    def n(self) -> int:
        return self.theta_factor.n

    def __call__(self, theta, q=0.0):
        return eval_derivatives(self, theta, q).value

    def __str__(self):
        parts = [p for p in (self.q_factor.label(), self.theta_factor.label()) if p and p != "1"]
        return "*".join(parts) or "1"


def eval_derivatives(f: BasisFunction, theta, q=0.0) -> Derivatives:
    """Value and first/second partials in theta and q, all closed form."""
    T, dT, ddT = f.theta_factor(theta)
    Q, dQ, ddQ = f.q_factor(q)
    return Derivatives(Q * T, Q * dT, Q * ddT, dQ * T, ddQ * T)


def build_basis(spec: BasisSpec, conf: Confinement | None = None) -> list[BasisFunction]:
    """Basis in q-major order: (j=0, every n), then (j=1, every n), ...

    The order fixes the Gram-Schmidt sequence and hence reproducible
    coefficient signs. Surface models ignore ``conf``.
    """
    if spec.model is Model.LAYER:
        if conf is None:
            raise ValueError("layer model needs a confinement")
        qs = [QFactor(j, conf) for j in range(spec.n_q)]
    else:
        qs = [QFactor(0, None)]
    return [
        BasisFunction(qf, ThetaFactor(n, spec.parity)) for qf in qs for n in spec.modes
    ]
