"""Command-line front end.

Subcommands: rates, evolve, qfi, sweep, verify. Flag values take precedence
over config-file values (JSON object mirroring the flag names), which take
precedence over built-in defaults. Angle flags accept literal multiples of
pi via the suffix "pi" (e.g. 0.1pi). Exit codes: 0 success, 1 verification
tolerance failure, 2 invalid input or conflicting flags.
"""

import argparse
import json
import math
import sys

import numpy as np

from .dynamics import (
    BlochState,
    DetectorParams,
    NegativeRateError,
    decay_rates,
    evolve_analytic,
)
from .geometry import BoundaryConfig
from .metrology import dphi_rho, qfi_general, qfi_record, spectral
from .sweep import (
    PRESET_NAMES,
    FixedParams,
    RunManifest,
    SweepSpec,
    run_preset,
    run_sweep,
    write_csv,
)
from .verify import run_all_checks

EVOLVE_COLUMNS = ("tau", "Bx", "By", "Bz", "Bnorm", "F")
RATES_COLUMNS = (
    "gamma_plus",
    "gamma_minus",
    "gamma_z",
    "transverse_decay",
    "longitudinal_decay",
    "bz_equilibrium",
)
QFI_COLUMNS = ("tau", "F", "F_closed", "crb")
REPORT_COLUMNS = ("check", "points", "max_err", "tol", "status")
RESPONSE_COLUMNS = ("a", "omega", "R", "alpha", "closed_form", "oracle", "rel_err")

DEFAULTS = {
    "omega0": 10.0,
    "lambda": 1.0,
    "a": 1.0,
    "theta": 0.5 * math.pi,
    "phi": 0.0,
    "tau": 1.0,
    "unbounded": False,
    "convention": "eq7",
    "omega-shift": 0.0,
    "measurements": 1,
    "tau-from": 0.0,
    "points": 101,
}


class CliError(Exception):
    """User-facing input error; mapped to exit code 2."""


def parse_angle(value) -> float:
    """Float, or a literal multiple of pi written with a 'pi' suffix."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower()
    if text.endswith("pi"):
        head = text[:-2].strip()
        if head in ("", "+"):
            return math.pi
        if head == "-":
            return -math.pi
        try:
            return float(head) * math.pi
        except ValueError as exc:
            raise CliError(f"cannot parse angle {value!r}") from exc
    try:
        return float(text)
    except ValueError as exc:
        raise CliError(f"cannot parse angle {value!r}") from exc


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(f"config {path} must hold a JSON object")
    return data


class Resolver:
    """Flag > config > default lookup."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self.args = args
        self.config = config

    def supplied(self, flag: str, attr: str | None = None):
        attr = attr or flag.replace("-", "_")
        value = getattr(self.args, attr, None)
        if value is None:
            value = self.config.get(flag)
            if value is None:
                value = self.config.get(flag.replace("-", "_"))
        return value

    def get(self, flag: str, attr: str | None = None, cast=None):
        value = self.supplied(flag, attr)
        if value is None:
            value = DEFAULTS.get(flag)
        if value is None:
            return None
        return cast(value) if cast else value


def _resolve_detector(res: Resolver) -> DetectorParams:
    return DetectorParams(
        omega0=res.get("omega0", cast=float),
        coupling=res.get("lambda", attr="lam", cast=float),
        a=res.get("a", cast=float),
    )


def _resolve_boundary(res: Resolver) -> BoundaryConfig:
    cli_unbounded = getattr(res.args, "unbounded", None) is True
    cli_mirror = getattr(res.args, "R", None) is not None or getattr(res.args, "alpha", None) is not None
    if cli_unbounded and cli_mirror:
        raise CliError("--unbounded conflicts with --R/--alpha")
    if res.get("unbounded"):
        return BoundaryConfig.unbounded()
    R = res.supplied("R")
    alpha = res.supplied("alpha")
    if R is None or alpha is None:
        raise CliError("boundary unspecified: pass --unbounded, or both --R and --alpha")
    return BoundaryConfig.two_perpendicular_mirrors(float(R), parse_angle(alpha))


def _boundary_parameters(boundary: BoundaryConfig) -> dict:
    if boundary.mirrors:
        return {"unbounded": False, "R": boundary.R, "alpha": boundary.alpha}
    return {"unbounded": True}


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise CliError(f"cannot parse {flag} list {text!r}") from exc


def cmd_rates(args: argparse.Namespace, config: dict) -> int:
    res = Resolver(args, config)
    detector = _resolve_detector(res)
    boundary = _resolve_boundary(res)
    convention = res.get("convention")
    out = res.supplied("out")
    rates = decay_rates(detector, boundary, convention)
    values = (
        rates.gamma_plus,
        rates.gamma_minus,
        rates.gamma_z,
        rates.transverse_decay,
        rates.longitudinal_decay,
        rates.bz_equilibrium,
    )
    for name, value in zip(RATES_COLUMNS, values):
        print(f"{name:18s} = {value:.12g}")
    if out:
        manifest = RunManifest.create(
            command="rates",
            parameters={
                "omega0": detector.omega0,
                "lambda": detector.coupling,
                "a": detector.a,
                **_boundary_parameters(boundary),
            },
            convention=convention,
            outputs=(out,),
        )
        write_csv(out, RATES_COLUMNS, [values], manifest)
    return 0


def _evolve_rows(res: Resolver, detector, boundary, convention):
    theta = res.get("theta", cast=parse_angle)
    phi = res.get("phi", cast=parse_angle)
    omega_shift = res.get("omega-shift", cast=float)
    tau_from = res.get("tau-from", cast=float)
    tau_to = res.supplied("tau-to")
    tau_to = float(tau_to) if tau_to is not None else res.get("tau", cast=float)
    points = res.get("points", cast=int)
    if not tau_from < tau_to:
        raise CliError(f"need tau-from < tau-to, got [{tau_from}, {tau_to}]")
    if points < 2:
        raise CliError(f"need at least 2 grid points, got {points}")

    rates = decay_rates(detector, boundary, convention)
    omega_eff = detector.omega0 + omega_shift
    s0 = BlochState.from_angles(theta, phi)
    rows = []
    for tau in np.linspace(tau_from, tau_to, points):
        evolved = evolve_analytic(s0, rates, omega_eff, tau)
        decomp = spectral(evolved, tau, theta, phi, rates, omega_eff)
        drho = dphi_rho(theta, phi, rates, omega_eff, tau)
        F = qfi_general(decomp, drho)
        rows.append((tau, evolved.bx, evolved.by, evolved.bz, evolved.norm, F))
    grid_params = {"theta": theta, "phi": phi, "omega_shift": omega_shift,
                   "tau_from": tau_from, "tau_to": tau_to, "points": points}
    return rows, grid_params


def cmd_evolve(args: argparse.Namespace, config: dict) -> int:
    res = Resolver(args, config)
    detector = _resolve_detector(res)
    boundary = _resolve_boundary(res)
    convention = res.get("convention")
    out = res.supplied("out")
    rows, grid_params = _evolve_rows(res, detector, boundary, convention)
    manifest = RunManifest.create(
        command="evolve",
        parameters={
            "omega0": detector.omega0,
            "lambda": detector.coupling,
            "a": detector.a,
            **_boundary_parameters(boundary),
            **grid_params,
        },
        convention=convention,
        outputs=(out,) if out else (),
    )
    if out:
        write_csv(out, EVOLVE_COLUMNS, rows, manifest)
    else:
        print(f"# manifest-digest: {manifest.digest()}")
        print(",".join(EVOLVE_COLUMNS))
        for row in rows:
            print(",".join("%.17g" % cell for cell in row))
    return 0


def cmd_qfi(args: argparse.Namespace, config: dict) -> int:
    res = Resolver(args, config)
    detector = _resolve_detector(res)
    boundary = _resolve_boundary(res)
    convention = res.get("convention")
    theta = res.get("theta", cast=parse_angle)
    phi = res.get("phi", cast=parse_angle)
    tau = res.get("tau", cast=float)
    measurements = res.get("measurements", cast=int)
    out = res.supplied("out")
    record = qfi_record(
        detector,
        boundary,
        theta=theta,
        phi=phi,
        tau=tau,
        omega_shift=res.get("omega-shift", cast=float),
        gamma_z_convention=convention,
        measurements=measurements,
    )
    print(f"tau       = {record.tau:.12g}")
    print(f"F         = {record.F:.12g}")
    print(f"F_closed  = {record.F_closed:.12g}")
    print(f"crb(M={measurements}) = {record.crb:.12g}")
    if out:
        manifest = RunManifest.create(
            command="qfi",
            parameters={
                "omega0": detector.omega0,
                "lambda": detector.coupling,
                "a": detector.a,
                **_boundary_parameters(boundary),
                "theta": theta,
                "phi": phi,
                "tau": tau,
                "measurements": measurements,
            },
            convention=convention,
            outputs=(out,),
        )
        write_csv(out, QFI_COLUMNS, [(record.tau, record.F, record.F_closed, record.crb)], manifest)
    return 0


def cmd_sweep(args: argparse.Namespace, config: dict) -> int:
    res = Resolver(args, config)
    preset = res.supplied("preset")
    swept = res.supplied("swept")
    if (preset is None) == (swept is None):
        raise CliError("pass exactly one of --preset or --swept")
    convention = res.get("convention")
    points = res.supplied("points")
    points = int(points) if points is not None else None
    workers = res.supplied("workers")
    workers = int(workers) if workers is not None else None

    if preset is not None:
        if preset not in PRESET_NAMES:
            raise CliError(f"unknown preset {preset!r}; expected one of {PRESET_NAMES}")
        columns = res.supplied("columns")
        column_values = _parse_float_list(columns, "--columns") if columns is not None else None
        start = res.supplied("from", attr="sweep_from")
        stop = res.supplied("to", attr="sweep_to")
        result = run_preset(
            preset,
            grid_start=parse_angle(start) if start is not None else None,
            grid_stop=parse_angle(stop) if stop is not None else None,
            points=points,
            columns=column_values,
            convention=convention,
            max_workers=workers,
        )
        out = res.supplied("out") or f"{preset}.csv"
        parameters = {
            "preset": preset,
            "grid_start": parse_angle(start) if start is not None else None,
            "grid_stop": parse_angle(stop) if stop is not None else None,
            "points": points,
            "columns": column_values,
        }
    else:
        if swept not in ("a", "R", "alpha", "tau", "theta"):
            raise CliError(f"cannot sweep {swept!r}")
        start = res.supplied("from", attr="sweep_from")
        stop = res.supplied("to", attr="sweep_to")
        if start is None or stop is None:
            raise CliError("generic sweep needs --from and --to")
        start = parse_angle(start) if swept in ("alpha", "theta") else float(start)
        stop = parse_angle(stop) if swept in ("alpha", "theta") else float(stop)
        alpha = res.supplied("alpha")
        theta = res.supplied("theta")
        phi = res.supplied("phi")
        fixed = FixedParams(
            omega0=_maybe_float(res.supplied("omega0")),
            coupling=_maybe_float(res.supplied("lambda", attr="lam")),
            a=_maybe_float(res.supplied("a")),
            unbounded=res.supplied("unbounded"),
            R=_maybe_float(res.supplied("R")),
            alpha=parse_angle(alpha) if alpha is not None else None,
            theta=parse_angle(theta) if theta is not None else None,
            phi=parse_angle(phi) if phi is not None else None,
            tau=_maybe_float(res.supplied("tau")),
            omega_shift=_maybe_float(res.supplied("omega-shift")),
        )
        spec = SweepSpec(
            swept=swept,
            start=start,
            stop=stop,
            points=points if points is not None else DEFAULTS["points"],
            fixed=fixed,
            convention=convention,
        )
        result = run_sweep(spec, max_workers=workers)
        out = res.supplied("out") or "sweep.csv"
        parameters = {
            "swept": swept,
            "start": start,
            "stop": stop,
            "points": spec.points,
            "fixed": {k: v for k, v in vars(fixed).items()},
        }

    manifest = RunManifest.create(
        command="sweep", parameters=parameters, convention=convention, outputs=(out,)
    )
    write_csv(out, result.columns, result.rows, manifest)
    print(f"wrote {out} ({len(result.rows)} rows) and {out}.manifest.json")
    return 0


def _maybe_float(value):
    return float(value) if value is not None else None


def cmd_verify(args: argparse.Namespace, config: dict) -> int:
    res = Resolver(args, config)
    window = _maybe_float(res.supplied("oracle-window"))
    schedule_text = res.supplied("eps-schedule")
    schedule = (
        tuple(_parse_float_list(schedule_text, "--eps-schedule")) if schedule_text else None
    )
    results, response_rows = run_all_checks(window=window, epsilon_schedule=schedule)
    for result in results:
        print(result.line())
    all_passed = all(r.passed for r in results)

    out = res.supplied("out")
    if out:
        manifest = RunManifest.create(
            command="verify",
            parameters={
                "window": window,
                "epsilon_schedule": list(schedule) if schedule else None,
            },
            convention=res.get("convention"),
            outputs=(out,),
        )
        report_rows = [
            (r.name, "%d" % r.points, "%.17g" % r.max_err, "%.17g" % r.tol,
             "pass" if r.passed else "fail")
            for r in results
        ]
        write_csv(out, REPORT_COLUMNS, report_rows, manifest)
        detail_path = _response_detail_path(out)
        detail_rows = [
            (
                "%.17g" % row["a"],
                "%.17g" % row["omega"],
                "" if row["R"] is None else "%.17g" % row["R"],
                "" if row["alpha"] is None else "%.17g" % row["alpha"],
                "%.17g" % row["closed_form"],
                "%.17g" % row["oracle"],
                "%.17g" % row["rel_err"],
            )
            for row in response_rows
        ]
        detail_manifest = RunManifest.create(
            command="verify",
            parameters=manifest.parameters,
            convention=res.get("convention"),
            outputs=(detail_path,),
        )
        write_csv(detail_path, RESPONSE_COLUMNS, detail_rows, detail_manifest)

    if not all_passed:
        failing = ", ".join(r.name for r in results if not r.passed)
        print(f"verification failed: {failing}", file=sys.stderr)
        return 1
    return 0


def _response_detail_path(out: str) -> str:
    if out.endswith(".csv"):
        return out[: -len(".csv")] + "_response.csv"
    return out + "_response.csv"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--omega0", type=float, help="detector energy gap")
    parser.add_argument("--lambda", dest="lam", type=float, help="coupling strength")
    parser.add_argument("--a", type=float, help="proper acceleration")
    parser.add_argument("--R", type=float, help="distance to the mirrors' intersection line")
    parser.add_argument("--alpha", type=str, help="angular position between mirrors (accepts e.g. 0.1pi)")
    parser.add_argument("--unbounded", action="store_const", const=True, default=None,
                        help="no mirrors: unbounded vacuum")
    parser.add_argument("--theta", type=str, help="initial polar angle (accepts e.g. 0.5pi)")
    parser.add_argument("--phi", type=str, help="initial phase (accepts e.g. 0.25pi)")
    parser.add_argument("--tau", type=float, help="proper time")
    parser.add_argument("--convention", choices=("eq7", "eq22"), help="dephasing-rate convention")
    parser.add_argument("--omega-shift", type=float, help="offset of the effective precession gap")
    parser.add_argument("--out", type=str, help="output CSV path")
    parser.add_argument("--config", type=str, help="JSON config file mirroring the flag names")
    parser.add_argument("--workers", type=int, help="worker pool bound for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udw-qfi",
        description="Phase-estimation QFI dynamics for a uniformly accelerated detector",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_rates = subparsers.add_parser("rates", help="decay rates and derived quantities")
    _add_common(p_rates)
    p_rates.set_defaults(func=cmd_rates)

    p_evolve = subparsers.add_parser("evolve", help="Bloch trajectory and QFI over a tau grid")
    _add_common(p_evolve)
    p_evolve.add_argument("--tau-from", type=float, help="grid start (default 0)")
    p_evolve.add_argument("--tau-to", type=float, help="grid end (default --tau)")
    p_evolve.add_argument("--points", type=int, help="grid size (default 101)")
    p_evolve.set_defaults(func=cmd_evolve)

    p_qfi = subparsers.add_parser("qfi", help="single-point QFI and estimation bound")
    _add_common(p_qfi)
    p_qfi.add_argument("--measurements", type=int, help="independent measurements M (default 1)")
    p_qfi.set_defaults(func=cmd_qfi)

    p_sweep = subparsers.add_parser("sweep", help="parameter sweep or figure preset")
    _add_common(p_sweep)
    p_sweep.add_argument("--preset", type=str, help="one of fig2, fig3, fig4")
    p_sweep.add_argument("--swept", type=str, help="variable to sweep: a, R, alpha, tau, theta")
    p_sweep.add_argument("--from", dest="sweep_from", type=str, help="sweep start")
    p_sweep.add_argument("--to", dest="sweep_to", type=str, help="sweep end")
    p_sweep.add_argument("--points", type=int, help="grid size")
    p_sweep.add_argument("--columns", type=str, help="comma-separated preset column values")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = subparsers.add_parser("verify", help="run all oracle cross-checks")
    _add_common(p_verify)
    p_verify.add_argument("--oracle-window", type=float, help="override quadrature half-width")
    p_verify.add_argument("--eps-schedule", type=str, help="comma-separated regulator schedule")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NegativeRateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
