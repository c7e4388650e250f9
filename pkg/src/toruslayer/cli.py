"""Command-line front end.

Verbs::

    toruslayer solve        --config run.cfg [--set key=value ...]
    toruslayer reproduce    --table {1,2,3}
    toruslayer profile      --quantity {vc,h,k,measure,wavefunction} --samples N
    toruslayer convergence  --max-n-theta 6 --max-n-q 3

Exit codes: 0 ok, 2 config error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys

import numpy as np

from toruslayer import __version__
from toruslayer.config import RunManifest, parse_config
from toruslayer.errors import ConfigError, NumericalError
from toruslayer.geometry import (
    TorusGeometry,
    curvature_potential,
    curvatures,
    measure,
)
from toruslayer import reference
from toruslayer.basis import BasisSpec
from toruslayer.quadrature import periodic_trapezoid
from toruslayer.spectra import SolveConfig, SpectralResult, format_coefficients, series_string, solve

log = logging.getLogger("toruslayer")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

UNITS_NOTE = (
    "units: hbar = m = 1; lengths in angstrom; E in 1/angstrom^2; "
    "beta = 2 a^2 (E - E_n) dimensionless"
)


def fmt(x) -> str:
    """CSV number: scientific notation, 17 significant digits (round-trips a double)."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def header_lines(config: dict | None, extra: dict | None = None) -> list[str]:
    lines = [f"# toruslayer {__version__}", f"# {UNITS_NOTE}"]
    for key, value in (config or {}).items():
        lines.append(f"# config {key} = {'' if value is None else value}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key} = {value}")
    return lines


def to_csv(columns, rows, config=None, extra=None, footer=()) -> str:
    out = io.StringIO()
    for line in header_lines(config, extra):
        out.write(line + "\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    for line in footer:
        out.write(f"# {line}\n")
    return out.getvalue()


def to_json(obj) -> str:
    # json writes floats with repr, i.e. round-trip precision
    return json.dumps(_jsonable({"version": __version__, "units": UNITS_NOTE, **obj}), indent=2)


# --- solve -----------------------------------------------------------------


def solve_payload(result: SpectralResult) -> dict:
    return {
        "config": result.config.as_dict(),
        "diagnostics": result.diagnostics,
        "basis": [str(f) for f in result.basis],
        "states": [
            {
                "E": float(result.energies[i]),
                "beta": float(result.betas[i]),
                "q_sector": int(result.q_sectors[i]),
                "coefficients": [float(c) for c in result.coefficients[i]],
            }
            for i in range(len(result.energies))
        ],
    }


def cmd_solve(manifest: RunManifest) -> str:
    result = solve(manifest.config)
    payload = solve_payload(result)
    if manifest.output_format == "json":
        return to_json(payload)
    n = len(result.basis)
    columns = ["state", "E", "beta", "q_sector"] + [f"c{r}" for r in range(n)]
    rows = [
        [i, s["E"], s["beta"], s["q_sector"], *s["coefficients"]]
        for i, s in enumerate(payload["states"])
    ]
    extra = {f"basis c{r}": str(f) for r, f in enumerate(result.basis)}
    extra.update({f"diagnostic {k}": fmt(v) for k, v in result.diagnostics.items()})
    return to_csv(columns, rows, payload["config"], extra)


# --- reproduce -------------------------------------------------------------

TABLE_TITLES = {
    1: "beta_0, beta_1, beta_2 (ground q-sector)",
    2: "ground state, ratios to the constant term (n = 0, 1, 2)",
    3: "first excited state, ratios to the cos(theta) term (n = 0, 1, 2)",
}


def cmd_reproduce(table: int, output_format="text", results=None) -> str:
    """Six published columns side by side with computed values and |deviation|."""
    results = results if results is not None else reference.solve_cases()
    rows = reference.reproduce(table, results)
    configs = {name: results[name].config.as_dict() for name in reference.CASES}
    if output_format == "json":
        return to_json(
            {
                "table": table,
                "title": TABLE_TITLES[table],
                "config": configs,
                "rows": [
                    {
                        "case": r.case,
                        "computed": list(r.computed),
                        "published": list(r.published),
                        "abs_deviation": list(r.deviation),
                    }
                    for r in rows
                ],
            }
        )
    if output_format == "csv":
        flat = []
        for r in rows:
            for i, c in enumerate(r.computed):
                p = r.published[i] if i < len(r.published) else None
                flat.append([r.case, i, c, p, None if p is None else abs(c - p)])
        extra = {"table": f"{table}: {TABLE_TITLES[table]}"}
        cfg = {f"{name}.{k}": v for name, d in configs.items() for k, v in d.items()}
        return to_csv(["case", "index", "computed", "published", "abs_deviation"], flat, cfg, extra)
    lines = [f"Table {table}: {TABLE_TITLES[table]}; R = 500 A, a = 250 A", ""]
    lines.append(f"{'case':<12}{'i':>3}{'computed':>14}{'published':>12}{'|dev|':>12}")
    for r in rows:
        for i, c in enumerate(r.computed):
            if i < len(r.published):
                p = r.published[i]
                lines.append(f"{r.case:<12}{i:>3}{c:>14.6f}{p:>12.4f}{abs(c - p):>12.2e}")
            else:
                lines.append(f"{r.case:<12}{i:>3}{c:>14.6f}{'-':>12}{'-':>12}")
    if table in (2, 3):
        lines.append("")
        for name in reference.CASES:
            res = results[name]
            k = 0 if table == 2 else 1
            conv = "constant_term" if table == 2 else "cos_theta_term"
            modes, ratios = format_coefficients(res, res.state(k), conv)
            q_label = res.basis[0].q_factor.label()
            lines.append(f"{name:<12}{series_string(modes, ratios, q_label)}")
    return "\n".join(lines) + "\n"


# --- profile ---------------------------------------------------------------

PROFILE_QUANTITIES = ("vc", "h", "k", "measure", "wavefunction")


def gauss_bonnet_sum(geom: TorusGeometry, n=256) -> float:
    """phi-integrated sum of k(theta, 0) M(theta, 0) over a periodic rule; 0 for a torus."""
    g = periodic_trapezoid(n)
    p = geom.point(g.nodes, 0.0)
    return 2.0 * math.pi * g.integrate(curvatures(geom, p).k * measure(geom, p))


def profile_rows(cfg: SolveConfig, quantity: str, samples: int, q_values=(0.0,), state=0):
    """Sample a quantity on theta in [0, pi] (inclusive) and the given q values."""
    if quantity not in PROFILE_QUANTITIES:
        raise ConfigError(f"unknown quantity {quantity!r}", key="quantity")
    if samples < 1:
        raise ConfigError("samples must be >= 1", key="samples")
    geom = cfg.geom
    thetas = np.linspace(0.0, math.pi, samples) if samples > 1 else np.array([0.0])
    footer = []
    if quantity == "vc":
        columns = ["theta", "V_C"]
        rows = [[t, float(curvature_potential(geom, t))] for t in thetas]
        return columns, rows, footer
    if quantity == "wavefunction":
        result = solve(cfg)
        idx = result.state(state)
        columns = ["theta", "q", "psi"]
        rows = []
        qs = (0.0,) if cfg.model.is_surface else q_values
        for t in thetas:
            for q in qs:
                rows.append([t, q, float(result.wavefunction(idx, t, q))])
        footer.append(f"state {state} of q-sector 0, beta = {result.betas[idx]:.10g}")
        return columns, rows, footer
    rows = []
    for t in thetas:
        for q in q_values:
            p = geom.point(t, q)
            if quantity == "h":
                val = curvatures(geom, p).h
            elif quantity == "k":
                val = curvatures(geom, p).k
            else:
                val = measure(geom, p)
            rows.append([t, q, float(val)])
    columns = ["theta", "q", quantity]
    if quantity == "k":
        footer.append(f"gauss_bonnet integral of k M dtheta dphi = {gauss_bonnet_sum(geom):.10e}")
    return columns, rows, footer


def cmd_profile(manifest: RunManifest, quantity, samples, q_values=(0.0,), state=0) -> str:
    columns, rows, footer = profile_rows(manifest.config, quantity, samples, q_values, state)
    if manifest.output_format == "json":
        return to_json(
            {"config": manifest.values, "quantity": quantity, "columns": columns, "rows": rows, "footer": footer}
        )
    return to_csv(columns, rows, manifest.values, {"quantity": quantity}, footer)


# --- convergence -----------------------------------------------------------


def convergence_rows(cfg: SolveConfig, max_n_theta, max_n_q, ladder=((64, 40), (128, 80))):
    """beta_0..2 versus basis size, then versus quadrature resolution at the table basis."""
    base = cfg.replace(table_reproduction=False)
    n_q_values = [1] if cfg.model.is_surface else range(2, max_n_q + 1)
    rows = []
    for n_q in n_q_values:
        for n_theta in range(3, max_n_theta + 1):
            spec = BasisSpec(base.model, n_theta=n_theta, n_q=max(n_q, 1), m=base.spec.m)
            res = solve(base.replace(spec=spec))
            rows.append([n_theta, n_q, base.n_theta_quad, base.n_q_quad, *res.sector_betas(0)[:3]])
    table_spec = BasisSpec(base.model, n_theta=3, n_q=2, m=base.spec.m)
    for nt, nq in ladder:
        res = solve(base.replace(spec=table_spec, n_theta_quad=nt, n_q_quad=nq))
        rows.append([3, 1 if cfg.model.is_surface else 2, nt, nq, *res.sector_betas(0)[:3]])
    return ["n_theta", "n_q", "quad_theta", "quad_q", "beta0", "beta1", "beta2"], rows


def cmd_convergence(manifest: RunManifest, max_n_theta=6, max_n_q=2, ladder=((64, 40), (128, 80))) -> str:
    if max_n_theta < 3 or max_n_q < 2:
        raise ConfigError("sweep bounds must be at least the table sizes (n_theta >= 3, n_q >= 2)")
    columns, rows = convergence_rows(manifest.config, max_n_theta, max_n_q, ladder)
    if manifest.output_format == "json":
        return to_json({"config": manifest.values, "columns": columns, "rows": rows})
    return to_csv(columns, rows, manifest.values)


# --- entry point -----------------------------------------------------------


def _ladder(text):
    pairs = []
    for item in text.split(","):
        a, _, b = item.strip().partition("x")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value config file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config key")
    common.add_argument("--format", choices=("csv", "json", "text"), default=None)
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--R", type=float, help="major radius (angstrom)")
    common.add_argument("--a", type=float, help="minor radius (angstrom)")
    common.add_argument("--model", help="layer | surface_hard_constraint | surface_bare")
    common.add_argument("--kind", help="hardwall_centered | hardwall_offset | oscillator")
    common.add_argument("--L", type=float, help="hard-wall width (angstrom)")
    common.add_argument("--omega", type=float, help="oscillator stiffness (1/angstrom^2)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="toruslayer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"toruslayer {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("solve", parents=[common], help="solve one configuration")
    p = sub.add_parser("reproduce", parents=[common], help="published tables side by side")
    p.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    p = sub.add_parser("profile", parents=[common], help="theta profiles of geometric quantities")
    p.add_argument("--quantity", choices=PROFILE_QUANTITIES, required=True)
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--q", default="0", help="comma-separated q values (angstrom)")
    p.add_argument("--state", type=int, default=0, help="state index within the ground q-sector")
    p = sub.add_parser("convergence", parents=[common], help="beta versus basis size and quadrature")
    p.add_argument("--max-n-theta", type=int, default=6)
    p.add_argument("--max-n-q", type=int, default=2)
    p.add_argument("--quad-ladder", type=_ladder, default=((64, 40), (128, 80)), help="e.g. 64x40,128x80")
    return parser


def _manifest(args) -> RunManifest:
    overrides = list(args.set)
    flag_keys = {
        "R": "geometry.R_angstrom",
        "a": "geometry.a_angstrom",
        "model": "model",
        "kind": "confinement.kind",
        "L": "confinement.L_angstrom",
        "omega": "confinement.omega_inv_ang2",
    }
    for attr, key in flag_keys.items():
        value = getattr(args, attr)
        if value is not None:
            overrides.append(f"{key}={value}")
    if args.omega is not None and args.kind is None and not any(
        o.startswith("confinement.kind") for o in overrides
    ):
        overrides.append("confinement.kind=oscillator")
    # geometric profiles need no confinement; fall back to a surface model
    if args.verb == "profile" and args.config is None and not any(
        o.startswith(("confinement.L", "confinement.omega", "model")) for o in overrides
    ):
        overrides.append("model=surface_hard_constraint")
    return parse_config(args.config, overrides, args.format or "csv", args.out)


def run(argv=None) -> tuple[int, str]:
    """Run the CLI; returns (exit code, output text)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.verb == "reproduce":
            # the six columns are fixed; only the output options apply
            manifest = RunManifest(None, {}, args.format or "text", args.out)
        else:
            manifest = _manifest(args)
        if args.verb == "solve":
            text = cmd_solve(manifest)
        elif args.verb == "reproduce":
            text = cmd_reproduce(args.table, manifest.output_format)
        elif args.verb == "profile":
            qs = tuple(float(x) for x in args.q.split(","))
            text = cmd_profile(manifest, args.quantity, args.samples, qs, args.state)
        else:
            text = cmd_convergence(manifest, args.max_n_theta, args.max_n_q, args.quad_ladder)
    except ConfigError as exc:
        return EXIT_CONFIG, f"config error: {exc}\n"
    except NumericalError as exc:
        return EXIT_NUMERICAL, f"numerical error: {exc}\n"
    except ValueError as exc:
        return EXIT_CONFIG, f"config error: {exc}\n"
    except OSError as exc:
        return EXIT_IO, f"I/O error: {exc}\n"
    if manifest.output_path:
        try:
            with open(manifest.output_path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            return EXIT_IO, f"I/O error: {exc}\n"
        return EXIT_OK, ""
    return EXIT_OK, text


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
