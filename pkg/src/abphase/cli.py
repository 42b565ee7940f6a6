"""Command-line front end: ``abphase [scenario] --config FILE --out DIR``.

Writes ``<scenario>.csv`` and ``summary.csv`` into the output directory and
prints a human-readable summary. Exit codes: 0 success, 1 configuration,
2 geometry, 3 numerical convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .config import SCENARIOS, ScenarioConfig, load_config, sweep_values, validate
from .errors import ABPhaseError, ConfigError
from .kernels import Polarization
from .model import CylindricalShell
from .scenarios import (
    circle_arms,
    run_electric_scenario,
    run_intermediate_scenario,
    run_magnetic_scenario,
    split_circuit,
    trap_legs,
    tube_arms,
)

SCHEMAS = {
    "magnetic": ("flux_Wb", "phase_rad", "q_flux_over_hbar", "ratio"),
    "intermediate": ("theta_rad", "phase_rad", "prediction_rad"),
    "electric": ("pulse_area_Vs", "phase_rad", "prediction_rad"),
    "kernel-check": ("separation_m", "dir_x", "dir_y", "dir_z", "pol", "value_quad", "value_closed", "rel_err"),
}
SUMMARY_SCHEMA = ("key", "value")


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "{:.12g}".format(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "" if value is None else str(value)


def emit_csv(rows, schema, out) -> None:
    """Write rows (sequences or mappings keyed by column) with a header; floats to 12 significant digits.

    ``out`` is a path or a text stream.
    """
    schema = tuple(schema)
    lines = []
    for row in rows:
        if isinstance(row, dict):
            missing = [c for c in schema if c not in row]
            if missing or len(row) != len(schema):
                raise ValueError(f"row keys {sorted(row)} do not match schema {list(schema)}")
            row = [row[c] for c in schema]
        if len(row) != len(schema):
            raise ValueError(f"row has {len(row)} fields, schema has {len(schema)}")
        lines.append([_fmt(v) for v in row])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema)
    writer.writerows(lines)
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())


@dataclass
class RunOutput:
    scenario: str
    rows: list
    summary: list = field(default_factory=list)
    passed: bool = True


# --------------------------------------------------------------------------
# scenario drivers


def _numerics(cfg):
    n = cfg.numerics
    return {"n_loops": n["n_loops"], "loop_nodes": n["loop_nodes"], "kernel_method": n["kernel_method"],
            "exclusion_radius": n["exclusion_radius"]}


def _flux_options(cfg):
    return {"ratio": cfg.numerics["flux_ratio"], "n_angular": cfg.numerics["flux_angular"],
            "exclusion_radius": cfg.numerics["exclusion_radius"]}


def _magnetic_arms(cfg, paths):
    s = cfg.settings
    if s["circuit"] is not None:
        p = paths[s["circuit"]]
        if p["type"] == "circle":
            return circle_arms(p["center"], p["radius"], p["samples"], p["axis"], speed=p["speed"])
        return split_circuit(p["vertices"], p["split"], speed=p["speed"])
    return paths[s["arms"][0]], paths[s["arms"][1]]


def _run_magnetic(cfg: ScenarioConfig) -> RunOutput:
    constants = cfg.physical_constants()
    objs = cfg.source_objects()
    s = cfg.settings
    names = s["sources"] or [x["name"] for x in cfg.sources if x["type"] in ("solenoid", "loop", "segments")]
    base = [objs[n] for n in names]
    arm_a, arm_b = _magnetic_arms(cfg, cfg.path_objects())
    scales = sweep_values(cfg) or [1.0]
    rows, ratios, reports = [], [], []
    for scale in scales:
        sources = [src.scaled(scale) for src in base]
        rep = run_magnetic_scenario(sources, arm_a, arm_b, q=cfg.charge(), constants=constants, route=s["route"],
                                    pol=s["pol"], numerics=_numerics(cfg), flux_n_loops=cfg.numerics["flux_loops"],
                                    flux_options=_flux_options(cfg))
        rows.append((rep.flux, rep.phase_diff, rep.q_flux_over_hbar, rep.ratio))
        ratios.append(rep.ratio)
        reports.append(rep)
    tol = cfg.tol
    # zero enclosed flux leaves the ratio undefined; the phase must then vanish
    ok = [abs(r.ratio - 1.0) <= tol if r.q_flux_over_hbar != 0.0 else r.phase_diff == 0.0 for r in reports]
    errs = [abs(r - 1.0) for r in ratios if math.isfinite(r)]
    last = reports[-1]
    summary = [("scenario", "magnetic"), ("route", s["route"]), ("pol", s["pol"]), ("points", len(rows)),
               ("phase_diff_rad", last.phase_diff), ("abs_phase_diff_rad", abs(last.phase_diff)),
               ("phase_a_rad", last.result.phase_a), ("phase_b_rad", last.result.phase_b),
               ("flux_oracle_Wb", last.flux), ("q_flux_over_hbar_rad", last.q_flux_over_hbar),
               ("ratio", last.ratio), ("nominal_ab_phase_rad", last.nominal_phase),
               ("max_abs_ratio_error", max(errs) if errs else math.nan), ("tol", tol),
               ("check", "phase_diff / (q flux / hbar) = 1"), ("passed", all(ok))]
    return RunOutput("magnetic", rows, summary, all(ok))


def _run_intermediate(cfg: ScenarioConfig) -> RunOutput:
    constants = cfg.physical_constants()
    s = cfg.settings
    solenoid = cfg.source_objects()[s["solenoid"]]
    sweep = cfg.sweep["parameter"] if cfg.sweep else None
    values = sweep_values(cfg) or [s["theta"]]
    tol = cfg.tol
    rows, ok, reports = [], [], []
    for v in values:
        theta = v if sweep == "theta" else s["theta"]
        sol = solenoid.scaled(v) if sweep == "current_scale" else solenoid
        src = s["source_radius"] if s["source_radius"] is not None else 4.0 * sol.radius
        legs = trap_legs(sol, theta, src, s["trap_radius"], source_angle=s["source_angle"], n=s["samples"])
        rep = run_intermediate_scenario(sol, theta, legs=legs, screen_point=s["screen_point"], q=cfg.charge(),
                                        constants=constants, route=s["route"], pol=s["pol"],
                                        numerics=_numerics(cfg))
        rows.append((rep.theta, rep.phase_diff, rep.prediction))
        ok.append(abs(rep.phase_diff - rep.prediction) <= tol * abs(rep.prediction) + 1e-12 * abs(rep.ab_phase))
        reports.append(rep)
    last = reports[-1]
    summary = [("scenario", "intermediate"), ("route", s["route"]), ("pol", s["pol"]), ("points", len(rows)),
               ("theta_rad", last.theta), ("phase_diff_rad", last.phase_diff),
               ("abs_phase_diff_rad", abs(last.phase_diff)), ("prediction_rad", last.prediction),
               ("ab_phase_rad", last.ab_phase), ("trap_radius_a_m", last.trap_radii[0]),
               ("trap_radius_b_m", last.trap_radii[1]), ("swept_angle_rad", last.swept_angle),
               ("screen_phase_rad", last.screen_phase)]
    if sweep == "theta" and len(rows) >= 2:
        th = np.array([r[0] for r in rows])
        ph = np.array([r[1] for r in rows])
        slope, intercept = np.polyfit(th, ph, 1)
        expected = last.ab_phase / (2 * math.pi)
        slope_ok = abs(slope - expected) <= tol * abs(expected)
        summary += [("fit_slope_rad_per_rad", slope), ("fit_intercept_rad", intercept),
                    ("expected_slope_rad_per_rad", expected), ("slope_passed", slope_ok)]
        ok.append(slope_ok)
    summary += [("tol", tol), ("check", "phase_diff = (theta / 2 pi) q Phi0 / hbar"), ("passed", all(ok))]
    return RunOutput("intermediate", rows, summary, all(ok))


def _run_electric(cfg: ScenarioConfig) -> RunOutput:
    constants = cfg.physical_constants()
    s = cfg.settings
    objs = cfg.source_objects()
    tube_a, tube_b = objs[s["tubes"][0]], objs[s["tubes"][1]]
    if s["arms"] is not None:
        paths = cfg.path_objects()
        arm_a, arm_b = paths[s["arms"][0]], paths[s["arms"][1]]
    else:
        arm_a, arm_b = tube_arms(tube_a, tube_b, s["split_point"], s["merge_point"], speed=s["speed"])
    tol = cfg.tol
    rows, ok, reports = [], [], []
    for scale in sweep_values(cfg) or [1.0]:
        ta, tb = (_scaled_tube(t, scale) for t in (tube_a, tube_b))
        rep = run_electric_scenario(ta, tb, arm_a, arm_b, q=cfg.charge(), constants=constants,
                                    numerics={"exclusion_radius": cfg.numerics["exclusion_radius"]})
        rows.append((rep.pulse_area, rep.phase_diff, rep.prediction))
        ok.append(abs(rep.phase_diff - rep.prediction) <= tol * abs(rep.prediction))
        reports.append(rep)
    last = reports[-1]
    summary = [("scenario", "electric"), ("points", len(rows)), ("phase_diff_rad", last.phase_diff),
               ("abs_phase_diff_rad", abs(last.phase_diff)), ("prediction_rad", last.prediction),
               ("pulse_area_Vs", last.pulse_area), ("window_start_s", last.window[0]),
               ("window_end_s", last.window[1]), ("tol", tol),
               ("check", "phase_diff = (q / hbar) integral (U_a - U_b) dt"), ("passed", all(ok))]
    return RunOutput("electric", rows, summary, all(ok))


def _scaled_tube(t: CylindricalShell, scale):
    return CylindricalShell(t.center, t.axis, t.radius, t.length, t.waveform.scaled(scale), t.name)


def kernel_check_rows(samples, r_min, r_max, pols, seed=0, ladder=kernels.DEFAULT_LADDER,
                      convergence_tol=kernels.QUADRATURE_TOL):
    """Rows of the kernel-check CSV.

    Full compares the scalar kernel with 1/(4 pi |R|); the polarization
    tensors report their traces and the Frobenius-norm relative error.
    """
    if not (0 < r_min <= r_max):
        raise ConfigError("kernel check needs 0 < r_min <= r_max", "kernel_check.r_min")
    rng = np.random.default_rng(seed)
    seps = np.geomspace(r_min, r_max, samples)
    dirs = rng.normal(size=(samples, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    rows = []
    for r, d in zip(seps, dirs):
        sep = r * d
        for name in pols:
            pol = Polarization.parse(name)
            if pol is Polarization.FULL:
                vq = kernels.scalar_kernel(sep, "quadrature", ladder, convergence_tol)
                vc = kernels.scalar_kernel(sep, "closed_form")
                err = abs(vq - vc) / abs(vc)
            else:
                tq = kernels.tensor_kernel(sep, pol, "quadrature", ladder, convergence_tol)
                tc = kernels.tensor_kernel(sep, pol, "closed_form")
                vq, vc = tq.trace, tc.trace
                err = float(np.linalg.norm(tq.t - tc.t) / np.linalg.norm(tc.t))
            rows.append((float(r), float(d[0]), float(d[1]), float(d[2]), pol.value, vq, vc, err))
    return rows


def _run_kernel_check(cfg: ScenarioConfig) -> RunOutput:
    s = cfg.settings
    rows = kernel_check_rows(s["samples"], s["r_min"], s["r_max"], s["pols"], cfg.numerics["seed"])
    tol = cfg.tol
    worst = max(r[-1] for r in rows)
    passed = worst < tol
    summary = [("scenario", "kernel-check"), ("points", len(rows)), ("pols", " ".join(s["pols"])),
               ("seed", cfg.numerics["seed"]), ("max_rel_err", worst), ("tol", tol),
               ("check", "quadrature kernel = closed form"), ("passed", passed)]
    return RunOutput("kernel-check", rows, summary, passed)


_DRIVERS = {"magnetic": _run_magnetic, "intermediate": _run_intermediate, "electric": _run_electric,
            "kernel-check": _run_kernel_check}


def execute(cfg: ScenarioConfig) -> RunOutput:
    return _DRIVERS[cfg.scenario](cfg)


def run(cfg: ScenarioConfig, out=None, stream=None) -> int:
    """Run the configured scenario, write CSVs into directory ``out`` (if given) and print a summary.

    Returns the exit status; library errors propagate to :func:`main`.
    """
    stream = sys.stdout if stream is None else stream
    result = execute(cfg)
    if out is not None:
        os.makedirs(out, exist_ok=True)
        emit_csv(result.rows, SCHEMAS[cfg.scenario], os.path.join(out, f"{cfg.scenario}.csv"))
        emit_csv(result.summary, SUMMARY_SCHEMA, os.path.join(out, "summary.csv"))
    width = max(len(k) for k, _ in result.summary)
    print(f"abphase {cfg.scenario}: {'PASS' if result.passed else 'FAIL'}", file=stream)
    for key, value in result.summary:
        print(f"  {key:<{width}}  {_fmt(value)}", file=stream)
    return 0


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abphase", description="Aharonov-Bohm phases from vacuum-energy shifts.")
    p.add_argument("command", nargs="?", choices=SCENARIOS, help="scenario to run (overrides the config)")
    p.add_argument("--config", help="YAML scenario config")
    p.add_argument("--out", help="output directory for <scenario>.csv and summary.csv")
    p.add_argument("--scenario", choices=SCENARIOS, help="scenario to run (overrides the config)")
    p.add_argument("--pol", choices=[x.value for x in Polarization], help="polarization set for mode-space runs")
    p.add_argument("--seed", type=int, help="seed for randomized checks")
    p.add_argument("--tol", type=float, help="pass/fail tolerance of the built-in check")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    scenario = args.scenario or args.command
    try:
        if args.config is not None:
            cfg = load_config(args.config)
        elif scenario == "kernel-check":
            cfg = validate({"scenario": "kernel-check"})
        else:
            raise ConfigError("--config is required for this scenario")
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be positive", "--tol")
        cfg = cfg.with_overrides(scenario=scenario, pol=args.pol, seed=args.seed, tol=args.tol)
        return run(cfg, args.out)
    except ABPhaseError as exc:
        print(f"abphase: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"abphase: error: cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
