"""Command-line front end.

    twolevel scenario --nu0T 10,20,100 --out curves/
    twolevel verify --nu0T 20
    twolevel adiabatic-report --nu0T 100 --out report/
    twolevel no-transition --theta0 0.6 --delta 0.2 --T 50,100,200
    twolevel sweep --nu0T 10,20,40,80,160 --jobs 4

Options may also come from a flat ``key = value`` file given with
``--config``; keys are the long option names (``nu0T``, ``samples``, ...)
plus ``command``. Flags on the command line win over the file.

Exit codes: 0 ok, 1 configuration error, 2 numerical failure,
3 synthesis invariant violation.
"""
import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .adiabatic import adiabaticity_report, estimate
from .errors import NumericalError, SynthesisError
from .oracle import IntegratorConfig, compare_trajectories, integrate
from .scenarios import DEFAULT_SAMPLES, ScenarioSpec, no_transition_ladder, sine_scenario

COMMANDS = ("scenario", "verify", "adiabatic-report", "no-transition", "sweep")

SCENARIO_COLUMNS = (
    "nu0_t",
    "Omega_over_hbar_nu0",
    "omega_abs_over_hbar_nu0",
    "chi",
    "Theta",
    "phibar",
    "P_minus_plus",
)
ADIABATIC_COLUMNS = (
    "nu0_t",
    "epsilon",
    "amp_exact_re",
    "amp_exact_im",
    "amp_approx_re",
    "amp_approx_im",
    "prob_approx",
    "std_criterion",
)
SWEEP_COLUMNS = (
    "nu0T",
    "alpha_over_nu0",
    "max_phi_omega_rate_over_nu0",
    "max_standard_criterion",
    "max_probability",
)
NO_TRANSITION_COLUMNS = ("T", "max_amplitude", "argmax_t", "unitarity_drift", "zeta_residual")
VERIFY_KEYS = ("max_frob", "argmax_t", "max_amp_discrepancy", "unitarity_drift")
VERIFY_THRESHOLD = 1e-6

DEFAULTS = {
    "nu0T": "10,20,100",
    "samples": str(DEFAULT_SAMPLES),
    "tol": "1e-11",
    "out": ".",
    "format": "csv",
    "hbar": "1.0",
    "phi_omega_rate": "0.0",
    "jobs": "1",
    "theta0": "0.6",
    "delta": "0.2",
    "nu": "1.0",
    "T": "50,100,200",
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="twolevel", description="Driven two-level system: exact propagator and adiabatic diagnostics.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="flat key = value file")
    p.add_argument("--nu0T", help="comma-separated nu0*T ladder (distinct, increasing)")
    p.add_argument("--samples", help="grid points on [0, T]")
    p.add_argument("--tol", help="oracle local error tolerance")
    p.add_argument("--out", help="output directory for CSV files")
    p.add_argument("--format", help="csv or pretty")
    p.add_argument("--hbar")
    p.add_argument("--phi-omega-rate", dest="phi_omega_rate", help="constant d(phi_omega)/dt in units of nu0")
    p.add_argument("--jobs", help="worker processes for sweeps")
    p.add_argument("--theta0", help="no-transition: initial mixing angle")
    p.add_argument("--delta", help="no-transition: total change of the mixing angle")
    p.add_argument("--nu", help="no-transition: energy / hbar")
    p.add_argument("--T", dest="T", help="no-transition: comma-separated durations")
    return p


def read_config(path):
    out = {}
    try:
        with open(path) as fh:
            for n, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{n}: expected key = value")
                k, v = (s.strip() for s in line.split("=", 1))
                out[k.replace("-", "_")] = v
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    unknown = set(out) - set(DEFAULTS) - {"command"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return out


def _floats(text, name):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"{name}: {e}") from e
    if not vals:
        raise ConfigError(f"{name}: empty list")
    if any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise ConfigError(f"{name}: values must be positive")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"{name}: values must be distinct and increasing")
    return vals


def _positive(text, name, kind=float):
    try:
        v = kind(text)
    except ValueError as e:
        raise ConfigError(f"{name}: {e}") from e
    if not v > 0:
        raise ConfigError(f"{name} must be positive")
    return v


def resolve(args):
    """Merge defaults, config file and flags into a plain settings dict."""
    merged = dict(DEFAULTS)
    command = args.command
    if args.config:
        cfg = read_config(args.config)
        command = command or cfg.pop("command", None)
        cfg.pop("command", None)
        merged.update(cfg)
    for key in DEFAULTS:
        v = getattr(args, key)
        if v is not None:
            merged[key] = v
    if command is None:
        raise ConfigError("no command given")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    if merged["format"] not in ("csv", "pretty"):
        raise ConfigError("format must be csv or pretty")
    try:
        theta0 = float(merged["theta0"])
        delta = float(merged["delta"])
        rate = float(merged["phi_omega_rate"])
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return {
        "command": command,
        "nu0T": _floats(merged["nu0T"], "nu0T"),
        "samples": _positive(merged["samples"], "samples", int),
        "tol": _positive(merged["tol"], "tol"),
        "out": merged["out"],
        "format": merged["format"],
        "hbar": _positive(merged["hbar"], "hbar"),
        "phi_omega_rate": rate,
        "jobs": _positive(merged["jobs"], "jobs", int),
        "theta0": theta0,
        "delta": delta,
        "nu": _positive(merged["nu"], "nu"),
        "T": _floats(merged["T"], "T"),
    }


def _spec(cfg, nu0T):
    rate = cfg["phi_omega_rate"]
    kw = {}
    if rate:
        kw = {"phi_omega": lambda t: rate * np.asarray(t, dtype=float), "phi_omega_dot": lambda t: np.full(np.shape(t), rate)}
    if cfg["samples"] < 4:
        raise ConfigError("samples must be at least 4")
    return ScenarioSpec.from_product(nu0T, samples=cfg["samples"], hbar=cfg["hbar"], **kw)


def _num(v):
    return repr(float(v))


def _label(v):
    return f"{v:g}"


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v) for v in row])


def _outdir(cfg):
    os.makedirs(cfg["out"], exist_ok=True)
    return cfg["out"]


def _print_table(header, rows, out):
    widths = [max(12, len(h)) for h in header]
    out.write("  ".join(f"{h:>{w}}" for h, w in zip(header, widths)) + "\n")
    for row in rows:
        out.write("  ".join(f"{v:>{w}.6g}" for v, w in zip(row, widths)) + "\n")


def cmd_scenario(cfg, out):
    for v in cfg["nu0T"]:
        spec = _spec(cfg, v)
        b = sine_scenario(spec)
        hn = spec.hbar * spec.nu0
        cols = np.column_stack(
            [spec.nu0 * b.t, b.Omega / hn, b.omega_abs / hn, b.state.chi, b.state.Theta, b.state.phibar, b.probability]
        )
        if cfg["format"] == "csv":
            path = os.path.join(_outdir(cfg), f"scenario_nu0T_{_label(v)}.csv")
            _write_csv(path, SCENARIO_COLUMNS, cols)
            out.write(f"wrote {path}\n")
        else:
            out.write(f"nu0T = {_label(v)}: max P(-|+) = {np.max(b.probability):.6g}\n")
            for k, (got, want) in b.endpoint_fields().items():
                out.write(f"  {k:<12} {got:.10g}  (closed form {want:.10g})\n")
    return 0


def cmd_verify(cfg, out):
    status = 0
    for v in cfg["nu0T"]:
        spec = _spec(cfg, v)
        b = sine_scenario(spec)
        o = integrate(b.hamiltonian, cfg=spec.integrator_config(tol=cfg["tol"]), samples=b.t)
        rep = compare_trajectories(b.propagator, o, b.hamiltonian)
        vals = (rep.max_frob, rep.argmax_t * spec.nu0, rep.max_amp_discrepancy, o.unitarity_drift)
        if len(cfg["nu0T"]) > 1:
            out.write(f"nu0T {_label(v)}\n")
        for k, x in zip(VERIFY_KEYS, vals):
            out.write(f"{k} {x:.6e}\n")
        if not rep.max_frob <= VERIFY_THRESHOLD:
            status = 2
    return status


def cmd_adiabatic(cfg, out):
    for v in cfg["nu0T"]:
        spec = _spec(cfg, v)
        b = sine_scenario(spec)
        e = estimate(b)
        if cfg["format"] == "csv":
            cols = np.column_stack(
                [
                    spec.nu0 * e.t,
                    e.epsilon,
                    e.amp_exact.real,
                    e.amp_exact.imag,
                    e.amp_approx.real,
                    e.amp_approx.imag,
                    e.prob_approx,
                    e.standard_criterion,
                ]
            )
            path = os.path.join(_outdir(cfg), f"adiabatic_nu0T_{_label(v)}.csv")
            _write_csv(path, ADIABATIC_COLUMNS, cols)
            out.write(f"wrote {path}\n")
        else:
            r = adiabaticity_report(spec, b)
            post = ~e.in_transient
            out.write(f"nu0T = {_label(v)}\n")
            out.write(f"  alpha/nu0                  {r.alpha_over_nu0:.6g}\n")
            out.write(f"  max phi_omega'/nu0         {r.max_phi_omega_rate_over_nu0:.6g}\n")
            out.write(f"  max standard criterion     {r.max_standard_criterion:.6g}\n")
            out.write(f"  max exact probability      {r.max_probability:.6g}\n")
            if np.any(post):
                out.write(f"  max |exact - approx|       {np.max(e.error()[post]):.6g}\n")
    return 0


def _sweep_row(args):
    cfg, v = args
    r = adiabaticity_report(_spec(cfg, v))
    return (r.nu0T, r.alpha_over_nu0, r.max_phi_omega_rate_over_nu0, r.max_standard_criterion, r.max_probability)


def cmd_sweep(cfg, out):
    work = [(cfg, v) for v in cfg["nu0T"]]
    if cfg["jobs"] > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as ex:
            rows = list(ex.map(_sweep_row, work))
    else:
        rows = [_sweep_row(w) for w in work]
    if cfg["format"] == "csv":
        path = os.path.join(_outdir(cfg), "sweep.csv")
        _write_csv(path, SWEEP_COLUMNS, rows)
        out.write(f"wrote {path}\n")
    else:
        _print_table(SWEEP_COLUMNS, rows, out)
    return 0


def cmd_no_transition(cfg, out):
    ladder = no_transition_ladder(
        cfg["theta0"],
        cfg["delta"],
        cfg["T"],
        nu=cfg["nu"],
        samples=cfg["samples"],
        cfg=IntegratorConfig.for_frequencies(cfg["nu"], tol=cfg["tol"]),
    )
    rows = [(T, rep.max_amplitude, rep.argmax_t, rep.unitarity_drift, syn.zeta_residual) for T, syn, rep in ladder]
    if cfg["format"] == "csv":
        path = os.path.join(_outdir(cfg), "no_transition.csv")
        _write_csv(path, NO_TRANSITION_COLUMNS, rows)
        out.write(f"wrote {path}\n")
    else:
        _print_table(NO_TRANSITION_COLUMNS, rows, out)
        for (T0, a0, *_), (T1, a1, *_) in zip(rows, rows[1:]):
            out.write(f"amplitude ratio T={_label(T1)} / T={_label(T0)}: {a1 / a0:.4f}\n")
    return 0


HANDLERS = {
    "scenario": cmd_scenario,
    "verify": cmd_verify,
    "adiabatic-report": cmd_adiabatic,
    "sweep": cmd_sweep,
    "no-transition": cmd_no_transition,
}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(err)
        return 1
    try:
        cfg = resolve(parser.parse_args(argv))
        return HANDLERS[cfg["command"]](cfg, out)
    except ConfigError as e:
        parser.print_usage(err)
        err.write(f"error: {e}\n")
        return 1
    except SynthesisError as e:
        err.write(f"synthesis error: {e}\n")
        return 3
    except NumericalError as e:
        err.write(f"numerical error: {e}\n")
        return 2
    except ValueError as e:
        err.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
