"""Config-driven command line: parse, validate, compute, emit CSV + manifest.

Config files are INI-style text: a [run] section plus exactly one study
section ([spectrum], [overlap-scan], [coefficient-scan], [site-overlap],
[kinetics] or [avalanche]).  All parameters are validated before any
computation starts; outputs are written only after every value exists and is
finite, so a failed run leaves no files behind.

Exit codes: 0 success, 2 validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .avalanche import AvalancheParams, DEFAULT_BACKEND, simulate_avalanche
from .errors import ConfigurationError, NumericalError
from .grids import Geometry, PotentialShape, PotentialSpec, make_grid
from .kinetics import (
    BarrierProfile,
    NucleationParams,
    contact_angle_factor,
    critical_radius_and_min_deposit,
    homogeneous_barrier,
    lifetime_ratio,
    wkb_rate,
)
from .overlap import coefficient_scan, overlap_scan, scan_grid, site_overlap_ladder
from .scenarios import get_scenario, list_scenarios
from .spectral import extract_phase_shifts, solve_spectrum

OUT_DIR_ENV = "FERMIDET_OUT_DIR"

_SHAPES = {
    "square_well": PotentialShape.SQUARE_WELL,
    "gaussian": PotentialShape.GAUSSIAN,
}
_GEOMETRIES = {
    "radial_swave": Geometry.RADIAL_SWAVE,
    "linear_box": Geometry.LINEAR_BOX,
}

_REQUIRED = object()


def _field(section: str, raw: dict, key: str, conv, default=_REQUIRED):
    if key not in raw:
        if default is _REQUIRED:
            raise ConfigurationError(f"[{section}] missing required key '{key}'")
        return default
    text = raw[key].strip()
    try:
        return conv(text)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"[{section}] {key} = {text!r}: {exc}") from None


def _int_list(text: str) -> list[int]:
    vals = [int(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def _float_list(text: str) -> list[float]:
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def _check_keys(section: str, raw: dict, allowed: set[str]) -> None:
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigurationError(f"[{section}] unknown key(s): {', '.join(sorted(unknown))}")


def _potential(section: str, raw: dict, center_key: str | None = None,
               optional: bool = False) -> PotentialSpec | None:
    shape_text = _field(section, raw, "shape", str, default="none" if optional else _REQUIRED)
    if shape_text == "none":
        stray = {"strength", "range", center_key or "center"} & set(raw)
        if stray:
            raise ConfigurationError(
                f"[{section}] shape = none but potential key(s) given: {', '.join(sorted(stray))}"
            )
        return None
    if shape_text not in _SHAPES:
        raise ConfigurationError(
            f"[{section}] shape = {shape_text!r}; expected square_well, gaussian or none"
        )
    strength = _field(section, raw, "strength", float)
    rng = _field(section, raw, "range", float)
    center = _field(section, raw, center_key or "center", float, default=0.0)
    try:
        return PotentialSpec(_SHAPES[shape_text], strength, rng, center)
    except ConfigurationError as exc:
        raise ConfigurationError(f"[{section}] {exc}") from None


# ---------------------------------------------------------------------------
# Study validators: raw section dict -> validated parameter dict
# ---------------------------------------------------------------------------

def _validate_spectrum(raw: dict) -> dict:
    sec = "spectrum"
    _check_keys(sec, raw, {"geometry", "length", "n_points", "n_eigenpairs",
                           "shape", "strength", "range", "center"})
    geom_text = _field(sec, raw, "geometry", str)
    if geom_text not in _GEOMETRIES:
        raise ConfigurationError(f"[{sec}] geometry = {geom_text!r}; "
                                 "expected radial_swave or linear_box")
    try:
        grid = make_grid(_field(sec, raw, "length", float),
                         _field(sec, raw, "n_points", int),
                         _GEOMETRIES[geom_text])
    except ConfigurationError as exc:
        raise ConfigurationError(f"[{sec}] {exc}") from None
    n_eigenpairs = _field(sec, raw, "n_eigenpairs", int)
    if n_eigenpairs < 1:
        raise ConfigurationError(f"[{sec}] n_eigenpairs must be >= 1")
    return {"grid": grid, "n_eigenpairs": n_eigenpairs,
            "potential": _potential(sec, raw, optional=True)}


def _validate_overlap_scan(raw: dict) -> dict:
    sec = "overlap-scan"
    _check_keys(sec, raw, {"shape", "strength", "range", "center", "density", "n_values"})
    density = _field(sec, raw, "density", float)
    if not density > 0:
        raise ConfigurationError(f"[{sec}] density must be positive")
    n_values = _field(sec, raw, "n_values", _int_list)
    if len(n_values) < 4:
        raise ConfigurationError(f"[{sec}] n_values needs at least 4 entries for the fit")
    return {"potential": _potential(sec, raw, optional=True),
            "density": density, "n_values": n_values}


def _validate_coefficient_scan(raw: dict) -> dict:
    sec = "coefficient-scan"
    _check_keys(sec, raw, {"shape", "strength", "range", "center", "density",
                           "n_values", "order", "window"})
    density = _field(sec, raw, "density", float)
    if not density > 0:
        raise ConfigurationError(f"[{sec}] density must be positive")
    order = _field(sec, raw, "order", int)
    if order not in (0, 1, 2):
        raise ConfigurationError(f"[{sec}] order must be 0, 1 or 2, got {order}")
    n_values = _field(sec, raw, "n_values", _int_list)
    window = _field(sec, raw, "window", int, default=None)
    if window is not None and window < 1:
        raise ConfigurationError(f"[{sec}] window must be >= 1")
    return {"potential": _potential(sec, raw), "density": density,
            "n_values": n_values, "order": order, "window": window}


def _validate_site_overlap(raw: dict) -> dict:
    sec = "site-overlap"
    _check_keys(sec, raw, {"shape", "strength", "range", "center_a", "center_b",
                           "n_values", "density"})
    shape_text = _field(sec, raw, "shape", str)
    if shape_text not in _SHAPES:
        raise ConfigurationError(f"[{sec}] shape = {shape_text!r}")
    density = _field(sec, raw, "density", float)
    if not density > 0:
        raise ConfigurationError(f"[{sec}] density must be positive")
    return {
        "shape": _SHAPES[shape_text],
        "strength": _field(sec, raw, "strength", float),
        "range": _field(sec, raw, "range", float),
        "center_a": _field(sec, raw, "center_a", float),
        "center_b": _field(sec, raw, "center_b", float),
        "n_values": _field(sec, raw, "n_values", _int_list),
        "density": density,
    }


def _validate_kinetics(raw: dict) -> dict:
    sec = "kinetics"
    mode = _field(sec, raw, "mode", str)
    if mode == "nucleation_sweep":
        _check_keys(sec, raw, {"mode", "surface_tension", "bulk_drive",
                               "temperature", "theta_points"})
        theta_points = _field(sec, raw, "theta_points", int)
        if theta_points < 2:
            raise ConfigurationError(f"[{sec}] theta_points must be >= 2")
        try:
            base = NucleationParams(
                surface_tension_sigma=_field(sec, raw, "surface_tension", float),
                bulk_drive_dg=_field(sec, raw, "bulk_drive", float),
                contact_angle_theta=0.0,
                temperature_kT=_field(sec, raw, "temperature", float),
            )
        except ConfigurationError as exc:
            raise ConfigurationError(f"[{sec}] {exc}") from None
        return {"mode": mode, "base": base, "theta_points": theta_points}
    if mode == "wkb_pair":
        _check_keys(sec, raw, {"mode", "breakpoints_x", "breakpoints_v",
                               "breakpoints_v_perturbed", "energy", "attempt_frequency"})
        xs = _field(sec, raw, "breakpoints_x", _float_list)
        vs = _field(sec, raw, "breakpoints_v", _float_list)
        vp = _field(sec, raw, "breakpoints_v_perturbed", _float_list)
        energy = _field(sec, raw, "energy", float)
        nu = _field(sec, raw, "attempt_frequency", float)
        try:
            unpert = BarrierProfile(tuple(xs), tuple(vs), energy, nu)
            pert = BarrierProfile(tuple(xs), tuple(vp), energy, nu)
        except ConfigurationError as exc:
            raise ConfigurationError(f"[{sec}] {exc}") from None
        return {"mode": mode, "unperturbed": unpert, "perturbed": pert}
    raise ConfigurationError(f"[{sec}] mode = {mode!r}; expected nucleation_sweep or wkb_pair")


def _validate_avalanche(raw: dict, rng_seed: int) -> dict:
    sec = "avalanche"
    _check_keys(sec, raw, {"alpha", "gap", "n_initial", "trials", "threshold",
                           "bin_width", "n_jobs"})
    try:
        params = AvalancheParams(
            townsend_alpha=_field(sec, raw, "alpha", float),
            gap_d=_field(sec, raw, "gap", float),
            n_initial=_field(sec, raw, "n_initial", int),
            trials=_field(sec, raw, "trials", int),
            rng_seed=rng_seed,
        )
    except ConfigurationError as exc:
        raise ConfigurationError(f"[{sec}] {exc}") from None
    threshold = _field(sec, raw, "threshold", int, default=1)
    bin_width = _field(sec, raw, "bin_width", int, default=1)
    n_jobs = _field(sec, raw, "n_jobs", int, default=1)
    if threshold < 1 or bin_width < 1 or n_jobs < 1:
        raise ConfigurationError(f"[{sec}] threshold, bin_width and n_jobs must be >= 1")
    return {"params": params, "threshold": threshold, "bin_width": bin_width,
            "n_jobs": n_jobs}


# ---------------------------------------------------------------------------
# Study runners: validated params -> (artifacts, manifest extras)
# Each artifact is (filename, column names, rows).
# ---------------------------------------------------------------------------

def _adequacy_entry(grid, potential, n_top):
    from .spectral import _adequacy_limit

    return {
        "length_L": grid.length_L,
        "n_points": grid.n_points,
        "spacing_h": grid.spacing_h,
        "h_limit": _adequacy_limit(grid, potential, n_top),
        "n_top": n_top,
    }


def _run_spectrum(p: dict):
    grid, pot, m = p["grid"], p["potential"], p["n_eigenpairs"]
    spectrum = solve_spectrum(grid, pot, m)
    artifacts = [(
        "spectrum_levels.csv",
        ["level", "energy"],
        [(i + 1, e) for i, e in enumerate(spectrum.energies)],
    )]
    extras = {"grid_adequacy": [_adequacy_entry(grid, pot, m)]}
    if grid.geometry is Geometry.RADIAL_SWAVE and pot is not None and not pot.is_zero():
        free = solve_spectrum(grid, None, m)
        table = extract_phase_shifts(free, spectrum)
        artifacts.append((
            "phase_shifts.csv",
            ["level", "momentum", "delta_rad", "delta_physical_rad"],
            [(int(n), k, d, dp) for n, k, d, dp in
             zip(table.level_indices, table.momenta, table.deltas, table.deltas_physical)],
        ))
        extras["phase_shift_branch"] = {
            "n_bound": table.n_bound,
            "branch_offset_pi": table.branch_offset_pi,
        }
    return artifacts, extras


def _run_overlap_scan(p: dict):
    scan = overlap_scan(p["potential"], p["n_values"], p["density"])
    rows = [
        (int(n), L, s, ls, int(sg), d)
        for n, L, s, ls, sg, d in zip(scan.n_values, scan.box_lengths, scan.abs_overlaps,
                                      scan.log_abs_overlaps, scan.signs, scan.delta_f_per_n)
    ]
    artifacts = [
        ("overlap_scan.csv",
         ["n", "box_length", "abs_overlap", "log_abs_overlap", "sign", "delta_f_rad"],
         rows),
        ("overlap_fit.csv",
         ["beta", "intercept_ln", "r_squared", "points_used", "points_excluded"],
         [(scan.fit.beta, scan.fit.intercept, scan.fit.r_squared,
           len(rows) - scan.fit.n_excluded, scan.fit.n_excluded)]),
    ]
    r0 = None if p["potential"] is None or p["potential"].is_zero() else p["potential"].range_r0
    adequacy = [
        _adequacy_entry(scan_grid(int(n), p["density"], r0), p["potential"], int(n))
        for n in scan.n_values
    ]
    return artifacts, {"grid_adequacy": adequacy}


def _run_coefficient_scan(p: dict):
    rows = []
    adequacy = []
    for n_f in p["n_values"]:
        window = p["window"] if p["window"] is not None else 2 * n_f
        n_top = n_f + window
        pot = p["potential"]
        r0 = None if pot is None or pot.is_zero() else pot.range_r0
        grid = scan_grid(n_f, p["density"], r0, n_top=n_top)
        free = solve_spectrum(grid, None, n_top)
        inter = free if pot is None or pot.is_zero() else solve_spectrum(grid, pot, n_f)
        report = coefficient_scan(free, inter, n_f, p["order"], window)
        rows.append((n_f, report.excitation_order, report.window,
                     report.ground_coefficient, report.max_coefficient,
                     report.captured_weight))
        adequacy.append(_adequacy_entry(grid, pot, n_top))
    artifacts = [(
        "coefficient_scan.csv",
        ["n", "order", "window", "ground_coefficient", "max_coefficient", "captured_weight"],
        rows,
    )]
    return artifacts, {"grid_adequacy": adequacy}


def _run_site_overlap(p: dict):
    ladder = site_overlap_ladder(p["shape"], p["strength"], p["range"],
                                 p["center_a"], p["center_b"], p["n_values"],
                                 p["density"])
    rows = [
        (s.n_occupied, s.box_length, s.cross.abs, s.cross.log_abs,
         s.a_vs_free.abs, s.a_vs_free.log_abs, s.b_vs_free.abs, s.b_vs_free.log_abs)
        for s in ladder
    ]
    artifacts = [(
        "site_overlap.csv",
        ["n", "box_length", "cross_abs", "cross_log_abs", "a_vs_free_abs",
         "a_vs_free_log_abs", "b_vs_free_abs", "b_vs_free_log_abs"],
        rows,
    )]
    pot = PotentialSpec(p["shape"], p["strength"], p["range"], p["center_a"])
    adequacy = [
        _adequacy_entry(
            scan_grid(s.n_occupied, p["density"], p["range"], geometry=Geometry.LINEAR_BOX),
            pot, s.n_occupied)
        for s in ladder
    ]
    return artifacts, {"grid_adequacy": adequacy}


def _run_kinetics(p: dict):
    if p["mode"] == "nucleation_sweep":
        base = p["base"]
        barrier = homogeneous_barrier(base)
        r_star, e_min = critical_radius_and_min_deposit(base)
        rows = []
        for theta in np.linspace(0.0, math.pi, p["theta_points"]):
            f = contact_angle_factor(float(theta))
            ln_ratio = (1.0 - f) * barrier / base.temperature_kT
            rows.append((float(theta), f, barrier, r_star, e_min, ln_ratio,
                         math.exp(ln_ratio) if ln_ratio < 700 else math.inf))
        artifacts = [(
            "kinetics_nucleation.csv",
            ["theta_rad", "contact_factor", "homogeneous_barrier", "critical_radius",
             "min_deposit", "ln_rate_ratio", "rate_ratio"],
            rows,
        )]
        return artifacts, {"nucleation_model": "spherical cap, surface + bulk deposit budget"}
    ru = wkb_rate(p["unperturbed"])
    rp = wkb_rate(p["perturbed"])
    ratio = lifetime_ratio(p["unperturbed"], p["perturbed"])
    artifacts = [(
        "kinetics_wkb.csv",
        ["action_unperturbed", "action_perturbed", "ln_rate_unperturbed",
         "ln_rate_perturbed", "ln_ratio", "log10_ratio", "ratio"],
        [(ru.action, rp.action, ru.log_rate, rp.log_rate,
          ratio.ln_ratio, ratio.log10_ratio, ratio.ratio)],
    )]
    return artifacts, {}


def _run_avalanche(p: dict):
    stats = simulate_avalanche(p["params"], trigger_threshold=p["threshold"],
                               bin_width=p["bin_width"], n_jobs=p["n_jobs"])
    artifacts = [
        ("avalanche_hist.csv",
         ["count", "frequency"],
         [(int(v), int(c)) for v, c in zip(stats.hist_values, stats.hist_counts)]),
        ("avalanche_summary.csv",
         ["trials", "n_initial", "alpha", "gap", "mean_gain", "variance_gain",
          "analytic_mean", "trigger_threshold", "trigger_fraction"],
         [(stats.trials, p["params"].n_initial, p["params"].townsend_alpha,
           p["params"].gap_d, stats.mean_gain, stats.variance_gain,
           stats.analytic_mean, stats.trigger_threshold, stats.trigger_fraction)]),
    ]
    return artifacts, {"cascade_backend": DEFAULT_BACKEND}


_STUDIES = {
    "spectrum": (_validate_spectrum, _run_spectrum),
    "overlap-scan": (_validate_overlap_scan, _run_overlap_scan),
    "coefficient-scan": (_validate_coefficient_scan, _run_coefficient_scan),
    "site-overlap": (_validate_site_overlap, _run_site_overlap),
    "kinetics": (_validate_kinetics, _run_kinetics),
    "avalanche": (_validate_avalanche, _run_avalanche),
}


# ---------------------------------------------------------------------------
# Config loading, CSV rendering, emission
# ---------------------------------------------------------------------------

def load_config_text(text: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"config parse error: {exc}") from None
    return {s: dict(parser.items(s)) for s in parser.sections()}


def load_config_file(path: Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    return load_config_text(text)


def _validate_config(config: dict):
    known = set(_STUDIES) | {"run"}
    unknown = set(config) - known
    if unknown:
        raise ConfigurationError(f"unknown section(s): {', '.join(sorted(unknown))}")
    studies = [s for s in config if s in _STUDIES]
    if len(studies) != 1:
        raise ConfigurationError(
            f"exactly one study section required, found {len(studies)}: {studies or 'none'}"
        )
    run_raw = config.get("run", {})
    _check_keys("run", run_raw, {"output_dir", "rng_seed", "format_version"})
    settings = {
        "output_dir": _field("run", run_raw, "output_dir", str, default="."),
        "rng_seed": _field("run", run_raw, "rng_seed", int, default=0),
        "format_version": _field("run", run_raw, "format_version", int, default=1),
    }
    if settings["format_version"] != 1:
        raise ConfigurationError(f"[run] format_version = {settings['format_version']} unsupported")
    study = studies[0]
    validator, runner = _STUDIES[study]
    if study == "avalanche":
        params = validator(config[study], settings["rng_seed"])
    else:
        params = validator(config[study])
    return settings, study, params, runner


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise NumericalError(f"boolean {value!r} has no CSV representation")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if not math.isfinite(v):
        raise NumericalError(f"non-finite value {v!r} in CSV output")
    return format(v, ".17g")


def render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise NumericalError("CSV row width does not match the header")
        lines.append(",".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(out_dir: Path, rendered: list[tuple[str, str, int]], manifest: dict,
          compute_seconds: float) -> None:
    """Write CSVs, then the manifest atomically; unlink everything on failure."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    t0 = time.perf_counter()
    try:
        for name, body, _ in rendered:
            path = out_dir / name
            path.write_text(body)
            written.append(path)
        manifest["timings_s"] = {
            "compute": compute_seconds,
            "write": time.perf_counter() - t0,
        }
        tmp = out_dir / "manifest.json.tmp"
        tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        os.replace(tmp, out_dir / "manifest.json")
    except BaseException:
        for path in written + [out_dir / "manifest.json.tmp"]:
            try:
                path.unlink()
            except OSError:
                pass
        raise


def execute(config: dict, out_override: Path | None = None) -> Path:
    """Validate and run one config; returns the output directory."""
    settings, study, params, runner = _validate_config(config)
    env_dir = os.environ.get(OUT_DIR_ENV)
    out_dir = Path(env_dir) if env_dir else (
        out_override if out_override is not None else Path(settings["output_dir"])
    )
    t0 = time.perf_counter()
    artifacts, extras = runner(params)
    t1 = time.perf_counter()
    rendered = []
    outputs_meta = []
    for name, columns, rows in artifacts:
        body = render_csv(columns, rows)
        rendered.append((name, body, len(rows)))
        outputs_meta.append({
            "file": name,
            "sha256": hashlib.sha256(body.encode()).hexdigest(),
            "bytes": len(body.encode()),
            "rows": len(rows),
        })
    manifest = {
        "format_version": settings["format_version"],
        "generator": {"name": "fermidet", "version": __version__},
        "subcommand": study,
        "rng_seed": settings["rng_seed"],
        "config": config,
        "outputs": outputs_meta,
        "grid_adequacy": extras.pop("grid_adequacy", None),
        **extras,
    }
    _emit(out_dir, rendered, manifest, compute_seconds=t1 - t0)
    return out_dir


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fermidet",
        description="Overlap decay, detector kinetics and cascade statistics from a config file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a config file")
    p_run.add_argument("config", type=Path)
    p_scen = sub.add_parser("scenario", help="run a canned scenario")
    p_scen.add_argument("name")
    p_scen.add_argument("--out", type=Path, default=None, help="output directory")
    sub.add_parser("list-scenarios", help="list canned scenarios")
    args = parser.parse_args(argv)

    try:
        if args.command == "list-scenarios":
            for name, description in list_scenarios():
                print(f"{name}: {description}")
            return 0
        if args.command == "run":
            config = load_config_file(args.config)
            out_dir = execute(config)
        else:
            scenario = get_scenario(args.name)
            out_dir = execute(scenario.config, out_override=args.out)
        print(f"wrote {out_dir}")
        return 0
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
