"""Flat ``key = value`` run configuration.

Example::

    # layer between centered hard walls
    geometry.R_angstrom = 500
    geometry.a_angstrom = 250
    model = layer
    confinement.kind = hardwall_centered
    confinement.L_angstrom = 25

Unset keys take the defaults in :data:`DEFAULTS`. ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from toruslayer.basis import BasisSpec, Confinement, ConfinementKind, Model
from toruslayer.errors import ConfigError
from toruslayer.geometry import TorusGeometry
from toruslayer.spectra import SolveConfig


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _choice(*options):
    def parse(text):
        t = str(text).strip()
        if t not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {t!r}")
        return t

    return parse


KEYS = {
    "geometry.R_angstrom": float,
    "geometry.a_angstrom": float,
    "model": _choice(*(m.value for m in Model)),
    "confinement.kind": _choice(*(k.value for k in ConfinementKind)),
    "confinement.L_angstrom": float,
    "confinement.omega_inv_ang2": float,
    "confinement.oscillator_exponent": _choice("physical", "paper"),
    "basis.n_theta": _int,
    "basis.n_q": _int,
    "basis.m": _int,
    "basis.parity": _choice("even", "odd"),
    "quadrature.n_theta": _int,
    "quadrature.n_q": _int,
    "quadrature.sigma_multiple": float,
    "mode.table_reproduction": _bool,
}

ALIASES = {
    "geometry.R": "geometry.R_angstrom",
    "geometry.a": "geometry.a_angstrom",
    "confinement.L": "confinement.L_angstrom",
    "confinement.omega": "confinement.omega_inv_ang2",
}

DEFAULTS = {
    "geometry.R_angstrom": 500.0,
    "geometry.a_angstrom": 250.0,
    "model": "layer",
    "confinement.kind": "hardwall_centered",
    "confinement.L_angstrom": None,
    "confinement.omega_inv_ang2": None,
    "confinement.oscillator_exponent": "physical",
    "basis.n_theta": 3,
    "basis.n_q": 2,
    "basis.m": 0,
    "basis.parity": "even",
    "quadrature.n_theta": 64,
    "quadrature.n_q": 40,
    "quadrature.sigma_multiple": 6.0,
    "mode.table_reproduction": False,
}


@dataclass
class RunManifest:
    config: SolveConfig
    values: dict = field(default_factory=dict)
    output_format: str = "csv"
    output_path: str | None = None


def canonical_key(key, line=None):
    key = key.strip()
    key = ALIASES.get(key, key)
    if key not in KEYS:
        raise ConfigError("unknown key", key=key, line=line)
    return key


def set_value(values: dict, key: str, text, line=None):
    key = canonical_key(key, line)
    try:
        values[key] = KEYS[key](text)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), key=key, line=line) from None


def parse_text(text: str, values: dict | None = None) -> dict:
    values = {} if values is None else values
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        set_value(values, key, value.strip(), line=lineno)
    return values


def parse_assignment(item: str, values: dict):
    """Apply one ``key=value`` override."""
    key, sep, value = item.partition("=")
    if not sep:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    set_value(values, key, value.strip())


def build_config(values: dict) -> SolveConfig:
    """Resolve defaults and validate into a SolveConfig."""
    v = {**DEFAULTS, **values}
    try:
        geom = TorusGeometry(v["geometry.R_angstrom"], v["geometry.a_angstrom"])
    except ValueError as exc:
        raise ConfigError(str(exc), key="geometry.a_angstrom") from None
    model = Model(v["model"])
    conf = None
    if model is Model.LAYER:
        kind = ConfinementKind(v["confinement.kind"])
        if kind is ConfinementKind.OSCILLATOR:
            if v["confinement.omega_inv_ang2"] is None:
                raise ConfigError("required for oscillator confinement", key="confinement.omega_inv_ang2")
            try:
                conf = Confinement.oscillator(
                    v["confinement.omega_inv_ang2"], v["confinement.oscillator_exponent"]
                )
            except ValueError as exc:
                raise ConfigError(str(exc), key="confinement.omega_inv_ang2") from None
        else:
            if v["confinement.L_angstrom"] is None:
                raise ConfigError("required for hard-wall confinement", key="confinement.L_angstrom")
            try:
                conf = Confinement(kind, L=v["confinement.L_angstrom"])
            except ValueError as exc:
                raise ConfigError(str(exc), key="confinement.L_angstrom") from None
    try:
        spec = BasisSpec(
            model,
            n_theta=v["basis.n_theta"],
            n_q=v["basis.n_q"],
            m=v["basis.m"],
            parity=v["basis.parity"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc), key="basis") from None
    try:
        return SolveConfig(
            geom,
            spec,
            conf,
            n_theta_quad=v["quadrature.n_theta"],
            n_q_quad=v["quadrature.n_q"],
            sigma_multiple=v["quadrature.sigma_multiple"],
            table_reproduction=v["mode.table_reproduction"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc), key="quadrature") from None


def parse_config(path=None, overrides=(), output_format="csv", output_path=None) -> RunManifest:
    """Read ``path`` (if given), apply ``key=value`` overrides, validate."""
    values = {}
    if path is not None:
        text = Path(path).read_text()
        parse_text(text, values)
    if isinstance(overrides, dict):
        for key, value in overrides.items():
            set_value(values, key, value)
    else:
        for item in overrides:
            parse_assignment(item, values)
    cfg = build_config(values)
    return RunManifest(cfg, cfg.as_dict(), output_format, output_path)
