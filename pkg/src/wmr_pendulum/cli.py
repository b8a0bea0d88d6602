"""Command-line front end: parse a scenario config, run it, write files.

Outputs per run:
  trajectory.csv  every sample, fixed 19-column schema, %.17g floats
  summary.txt     human-readable digest plus a machine key=value block

The CSV is written with deterministic formatting and LF line endings so
repeat runs of the same scenario are bit-identical files.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import configparser
import dataclasses
import math
import re
import sys
from importlib import resources
from pathlib import Path

from . import diagnostics
from .errors import (
    ConstraintViolation,
    NeverConverged,
    NonFiniteInput,
    NonFiniteState,
    OriginSingularity,
    ParseError,
    ValidationError,
    WrongMode,
)
from .model import FullVelocityState, Gains, Params, wrap_angle
from .sim import Scenario, Trajectory, detect_events, simulate

_FLOAT_KEYS = {
    "params": {"M", "m", "J", "l", "g", "d", "R"},
    "gains": {"k_E", "k_p", "k_v", "k_psi", "k_psi_dot", "eps_origin"},
    "initial": {"x", "y", "psi", "theta", "x_dot", "y_dot", "psi_dot", "theta_dot"},
    "sim": {"dt", "t_final", "sample_period", "constraint_tol"},
}
_OTHER_KEYS = {"sim": {"control_mode", "eq24_printed_form"}}
_REQUIRED = {
    "params": ("M", "m", "J", "l", "g"),
    "gains": ("k_E", "k_p", "k_v", "k_psi", "k_psi_dot"),
}

# pi expressions accepted in config values: pi, -pi, pi/4, 3*pi/2, 0.5*pi
_PI_RE = re.compile(
    r"(?i)^\s*(-)?\s*(?:(\d+(?:\.\d*)?(?:e[+-]?\d+)?)\s*\*\s*)?pi\s*(?:/\s*(\d+(?:\.\d*)?(?:e[+-]?\d+)?))?\s*$"
)


def parse_number(text: str):
    """Parse a config float, allowing simple multiples and fractions of pi."""
    m = _PI_RE.match(text)
    if m:
        value = math.pi
        if m.group(2):
            value *= float(m.group(2))
        if m.group(3):
            value /= float(m.group(3))
        return -value if m.group(1) else value
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"cannot parse number {text!r}") from None


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ParseError(f"cannot parse boolean {text!r}")


def resolve_config_path(name: str) -> Path:
    """Accept a filesystem path or the name of a bundled config."""
    path = Path(name)
    if path.is_file():
        return path
    stem = name if name.endswith(".cfg") else name + ".cfg"
    bundled = resources.files("wmr_pendulum").joinpath("configs", stem)
    if bundled.is_file():
        return Path(str(bundled))
    available = ", ".join(
        sorted(p.name for p in resources.files("wmr_pendulum").joinpath("configs").iterdir())
    )
    raise ParseError(f"config {name!r} not found (bundled: {available})")


def parse_config(path) -> Scenario:
    """Read one scenario config; reject unknown sections, keys, and values."""
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None
    )
    parser.optionxform = str
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ParseError(f"malformed config {path}: {exc}") from exc

    values: dict = {}
    for section in parser.sections():
        if section not in _FLOAT_KEYS:
            raise ParseError(f"unknown section [{section}] in {path}")
        values[section] = {}
        for key, raw in parser.items(section):
            if key in _FLOAT_KEYS[section]:
                try:
                    values[section][key] = parse_number(raw)
                except ParseError as exc:
                    raise ParseError(f"[{section}] {key}: {exc}") from None
            elif key in _OTHER_KEYS.get(section, ()):
                values[section][key] = raw.strip()
            else:
                raise ParseError(f"unknown key {key!r} in section [{section}] of {path}")

    for section, required in _REQUIRED.items():
        present = values.get(section, {})
        missing = [key for key in required if key not in present]
        if missing:
            raise ParseError(
                f"missing required key(s) {', '.join(missing)} in section [{section}] of {path}"
            )
    if "initial" not in values:
        raise ParseError(f"missing section [initial] in {path}")

    params = Params(**values["params"])
    gains = Gains(**values["gains"])
    initial_values = {key: 0.0 for key in _FLOAT_KEYS["initial"]}
    initial_values.update(values["initial"])
    initial = FullVelocityState(**initial_values)

    sim_values = dict(values.get("sim", {}))
    scenario_kwargs = {}
    for key in ("dt", "t_final", "sample_period", "constraint_tol"):
        if key in sim_values:
            scenario_kwargs[key] = sim_values.pop(key)
    if "control_mode" in sim_values:
        scenario_kwargs["control_mode"] = sim_values.pop("control_mode")
    if "eq24_printed_form" in sim_values:
        scenario_kwargs["eq24_printed_form"] = _parse_bool(sim_values.pop("eq24_printed_form"))
    return Scenario(params=params, gains=gains, initial=initial, **scenario_kwargs)


def write_trajectory_csv(tr: Trajectory, path) -> None:
    """Write the fixed-schema CSV; %.17g keeps every float round-trippable."""
    names = [name for name, _ in Trajectory.CSV_COLUMNS]
    columns = [getattr(tr, attr).tolist() for _, attr in Trajectory.CSV_COLUMNS]
    line = ",".join(["%.17g"] * len(columns)) + "\n"
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*columns):
            fh.write(line % row)


def _is_hanging_rest(initial: FullVelocityState) -> bool:
    # theta = pi with no tilt rate: the energy pump has zero lever arm
    # there, so swing-up cannot start from this initial condition.
    return (
        math.isclose(abs(wrap_angle(initial.theta)), math.pi, abs_tol=1e-12)
        and initial.theta_dot == 0.0
    )


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def build_summary(name: str, sc: Scenario, tr: Trajectory, comparison=None) -> str:
    """Render summary.txt: prose first, then the machine key=value block."""
    report = diagnostics.ResidualReport.from_trajectory(tr)
    events = detect_events(tr)
    by_name: dict = {}
    for event in events:
        by_name.setdefault(event.name, []).append(event.t)

    k_last = len(tr) - 1
    final_r = math.hypot(float(tr.x[k_last]), float(tr.y[k_last]))
    lines = [
        f"scenario: {name}",
        "status: completed",
        f"mode: {sc.control_mode} (dt={sc.dt:g}, t_final={sc.t_final:g})",
        f"swing-energy form: {'printed' if sc.eq24_printed_form else 'corrected'}",
        "",
        "final sample:",
        f"  t={tr.t[k_last]:g}  x={tr.x[k_last]:.6g}  y={tr.y[k_last]:.6g}  "
        f"psi={tr.psi[k_last]:.6g}  theta={tr.theta[k_last]:.6g}",
        f"  v={tr.v[k_last]:.6g}  psi_dot={tr.psi_dot[k_last]:.6g}  "
        f"theta_dot={tr.theta_dot[k_last]:.6g}",
        f"  |E|={abs(float(tr.E[k_last])):.3e}  distance to origin={final_r:.3e}  "
        f"|e_psi|={abs(float(tr.e_psi[k_last])):.3e}",
        "",
        "events:",
    ]
    for label in ("energy-captured", "near-upright", "origin-reached"):
        times = by_name.get(label)
        if not times:
            lines.append(f"  {label}: none")
        elif label == "near-upright":
            lines.append(f"  {label}: {len(times)} entry(ies), first at t={times[0]:g}")
        else:
            lines.append(f"  {label}: t={times[0]:g}")

    lines += [
        "",
        "residual maxima:",
        f"  power-balance: {report.power_balance_max:.3e}",
        f"  collinearity: {report.collinearity_max:.3e}",
        f"  constraint: {report.constraint_max:.17g}",
        f"  V_E step increase: {report.v_e_step_max:.3e}",
        f"  V_psi step increase: {report.v_psi_step_max:.3e}",
    ]
    if report.energy_law_max is not None:
        lines.append(f"  energy-law: {report.energy_law_max:.3e}")
    if report.cartpole_tail_max is not None:
        lines.append(
            f"  steady-state cart-pole (tail from t={report.cartpole_tail_t[0]:g}): "
            f"{report.cartpole_tail_max:.3e}"
        )
    if comparison is not None:
        corrected, printed = comparison
        lines += [
            "",
            "swing-energy form comparison:",
            f"  decay-law residual max, corrected: {corrected:.3e}",
            f"  decay-law residual max, printed: {printed:.3e}",
            f"  ratio printed/corrected: {printed / corrected:.3e}",
        ]
    flags = []
    if _is_hanging_rest(sc.initial):
        flags.append("excluded initial condition: no swing-up")
    if flags:
        lines += ["", "flags:"] + [f"  {flag}" for flag in flags]

    machine = {
        "final_t": float(tr.t[k_last]),
        "final_x": float(tr.x[k_last]),
        "final_y": float(tr.y[k_last]),
        "final_psi": float(tr.psi[k_last]),
        "final_theta": float(tr.theta[k_last]),
        "final_v": float(tr.v[k_last]),
        "final_psi_dot": float(tr.psi_dot[k_last]),
        "final_theta_dot": float(tr.theta_dot[k_last]),
        "final_E": float(tr.E[k_last]),
        "final_E_total": float(tr.E_total[k_last]),
        "final_e_psi": float(tr.e_psi[k_last]),
        "final_distance": final_r,
        "event_energy_captured": (by_name.get("energy-captured") or [None])[0],
        "event_origin_reached": (by_name.get("origin-reached") or [None])[0],
        "event_near_upright_count": len(by_name.get("near-upright", [])),
        "event_near_upright_first": (by_name.get("near-upright") or [None])[0],
        "residual_power_balance_max": report.power_balance_max,
        "residual_collinearity_max": report.collinearity_max,
        "residual_constraint_max": report.constraint_max,
        "residual_v_e_step_max": report.v_e_step_max,
        "residual_v_psi_step_max": report.v_psi_step_max,
        "residual_energy_law_max": report.energy_law_max,
        "residual_cartpole_tail_max": report.cartpole_tail_max,
        "cartpole_tail_start": (
            None if report.cartpole_tail_t is None else float(report.cartpole_tail_t[0])
        ),
        "excluded_initial_condition": (
            "no swing-up" if _is_hanging_rest(sc.initial) else None
        ),
    }
    if comparison is not None:
        corrected, printed = comparison
        machine["eq24_residual_corrected"] = corrected
        machine["eq24_residual_printed"] = printed
        machine["eq24_residual_ratio"] = printed / corrected

    lines += ["", "--- machine ---"]
    lines += [f"{key}={_fmt(value)}" for key, value in machine.items()]
    return "\n".join(lines) + "\n"


def _apply_overrides(sc: Scenario, args) -> Scenario:
    replacements = {}
    if args.dt is not None:
        replacements["dt"] = args.dt
    if args.t_final is not None:
        replacements["t_final"] = args.t_final
    if args.mode is not None:
        replacements["control_mode"] = args.mode
    if args.printed_eq24:
        replacements["eq24_printed_form"] = True
    return dataclasses.replace(sc, **replacements) if replacements else sc


def run_one(config: str, out_dir: Path, args) -> None:
    """Simulate one config and write trajectory.csv + summary.txt."""
    path = resolve_config_path(config)
    name = path.stem
    sc = _apply_overrides(parse_config(path), args)

    comparison = None
    if args.printed_eq24:
        if sc.gains.k_p != 0.0 or sc.gains.k_v != 0.0:
            raise WrongMode(
                "--printed-eq24 compares swing-energy decay, which needs k_p = k_v = 0"
            )
        tr = simulate(sc)
        corrected = simulate(dataclasses.replace(sc, eq24_printed_form=False))
        comparison = (
            float(max(abs(x) for x in diagnostics.energy_law_residual(corrected))),
            float(max(abs(x) for x in diagnostics.energy_law_residual(tr))),
        )
    else:
        tr = simulate(sc)

    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(tr, out_dir / "trajectory.csv")
    (out_dir / "summary.txt").write_text(
        build_summary(name, sc, tr, comparison), encoding="utf-8"
    )


def _run_job(job) -> tuple:
    config, out_dir, args = job
    try:
        run_one(config, out_dir, args)
    except (ParseError, ValidationError, WrongMode, NeverConverged) as exc:
        return (config, 1, str(exc))
    except ConstraintViolation as exc:
        return (config, 2, str(exc))
    except (NonFiniteState, NonFiniteInput, OriginSingularity) as exc:
        return (config, 3, str(exc))
    return (config, 0, str(out_dir))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wmr-pendulum",
        description="Simulate an inverted pendulum on a differential-drive robot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run one or more scenario configs")
    run_parser.add_argument(
        "--config",
        action="append",
        required=True,
        metavar="PATH",
        help="config file path or bundled config name; repeat for a batch",
    )
    run_parser.add_argument("--out", default="out", metavar="DIR", help="output directory")
    run_parser.add_argument("--dt", type=float, default=None, help="override time step")
    run_parser.add_argument(
        "--t-final", type=float, default=None, help="override horizon length"
    )
    run_parser.add_argument(
        "--mode",
        choices=("continuous", "sampled"),
        default=None,
        help="override control mode",
    )
    run_parser.add_argument(
        "--printed-eq24",
        action="store_true",
        help="use the historical swing-energy form and record a decay comparison",
    )
    run_parser.add_argument(
        "--jobs", type=int, default=1, metavar="N", help="run configs in N processes"
    )
    args = parser.parse_args(argv)

    out_root = Path(args.out)
    if len(args.config) == 1:
        jobs = [(args.config[0], out_root, args)]
    else:
        jobs = [
            (config, out_root / Path(config).stem, args) for config in args.config
        ]

    if args.jobs > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(job) for job in jobs]

    worst = 0
    for config, code, message in results:
        if code == 0:
            print(f"{config}: ok ({message})")
        else:
            print(f"{config}: error: {message}", file=sys.stderr)
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
