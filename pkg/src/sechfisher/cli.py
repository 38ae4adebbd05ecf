"""Command-line front end: ``sechfisher {profile,fisher,fwhm,montecarlo,verify}``.

Every command builds a table of named columns and writes it as CSV (header
row, '%.17g' numbers) or as a JSON object with ``config``, ``provenance`` and
``data`` keys.  Grid values are drive frequencies omega; detunings are
omega - omega0, and the dimensionless tau*Delta is written alongside.

Settings come from flags, optionally seeded by ``--config PATH`` holding
``key = value`` lines (keys as the long flag names); explicit flags win.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .composite import (
    SequenceSpec,
    sequence_derivative,
    sequence_propagator,
    sequence_propagator_chebyshev,
    sequence_propagator_direct,
    same_phase_power,
)
from .errors import SechFisherError
from .estimation import ScanProtocol, run_experiment
from .fisher import (
    curvature_on_resonance,
    fisher_on_resonance_composite,
    fwhm,
    probability_profile,
    sequence_fisher,
)
from .ode import IntegrationConfig, integrate_pulse, integrate_sequence
from .propagator import PulseParams, cayley_klein, transition_probabilities

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

COMMANDS = ("profile", "fisher", "fwhm", "montecarlo", "verify")

# built-in defaults; grid bounds default to omega0 -/+ span/tau
_DEFAULTS = {
    "tau": 1.0,
    "rabi": None,
    "omega0": 0.0,
    "n_half": 0,
    "phase": "pi",
    "grid_min": None,
    "grid_max": None,
    "grid_points": None,
    "shots": 250,
    "trials": 2000,
    "seed": 0,
    "format": "csv",
    "out": None,
    "backend": "analytic",
    "tol": None,
    "window": 25.0,
    "workers": 1,
}
_SPAN = {"montecarlo": 3.0}
_POINTS = {"montecarlo": 21}


class ConfigError(ValueError):
    pass


def parse_phase(text):
    """'0', 'pi', '-pi', 'pi/k', 'k*pi' or a float in radians."""
    s = str(text).strip().lower().replace(" ", "")
    sign = -1.0 if s.startswith("-") else 1.0
    s = s.lstrip("+-")
    try:
        if s == "pi":
            return sign * np.pi
        if s.startswith("pi/"):
            return sign * np.pi / float(s[3:])
        if s.endswith("*pi"):
            return sign * float(s[:-3]) * np.pi
        if s.endswith("pi"):
            return sign * float(s[:-2]) * np.pi
        return sign * float(s)
    except ValueError:
        raise ConfigError(f"cannot parse phase {text!r}") from None


def read_config_file(path):
    """key = value lines; '#' starts a comment; dashes in keys become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected key=value")
            key, val = (x.strip() for x in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in _DEFAULTS:
                raise ConfigError(f"{path}:{n}: unknown key {key!r}")
            out[key] = val
    return out


_CASTS = {
    "tau": float, "rabi": float, "omega0": float, "n_half": int, "grid_min": float,
    "grid_max": float, "grid_points": int, "shots": int, "trials": int, "seed": int,
    "tol": float, "window": float, "workers": int,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one command."""

    command: str
    tau: float
    rabi: float
    omega0: float
    n_half: int
    phase: float
    grid_min: float
    grid_max: float
    grid_points: int
    shots: int
    trials: int
    seed: int
    format: str
    out: object
    backend: str
    tol: object
    window: float
    workers: int

    @property
    def grid(self):
        return np.linspace(self.grid_min, self.grid_max, self.grid_points)

    @property
    def sequence(self):
        base = PulseParams(amplitude=self.rabi, width=self.tau, drive=self.omega0, resonance=self.omega0)
        return SequenceSpec(self.n_half, self.phase, base)

    def as_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["out"] = None if self.out is None else str(self.out)
        return d


def resolve_config(args):
    """Merge built-in defaults, the config file and explicit flags, then validate."""
    merged = dict(_DEFAULTS)
    if args.config:
        try:
            merged.update(read_config_file(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for key in _DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        for key, cast in _CASTS.items():
            if merged[key] is not None:
                merged[key] = cast(merged[key])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    cmd = args.command
    tau = merged["tau"]
    if not tau > 0:
        raise ConfigError("--tau must be positive")
    rabi = 1.0 / tau if merged["rabi"] is None else merged["rabi"]
    if rabi < 0:
        raise ConfigError("--rabi must be non-negative")
    if merged["n_half"] < 0:
        raise ConfigError("--n-half must be non-negative")
    phase = parse_phase(merged["phase"])
    span = _SPAN.get(cmd, 6.0) / tau
    omega0 = merged["omega0"]
    gmin = omega0 - span if merged["grid_min"] is None else merged["grid_min"]
    gmax = omega0 + span if merged["grid_max"] is None else merged["grid_max"]
    points = _POINTS.get(cmd, 241) if merged["grid_points"] is None else merged["grid_points"]
    if points < 1:
        raise ConfigError("grid is empty")
    if points > 1 and not gmax > gmin:
        raise ConfigError("--grid-max must exceed --grid-min")
    if merged["format"] not in ("csv", "json"):
        raise ConfigError("--format must be csv or json")
    if merged["backend"] not in ("analytic", "direct", "ode"):
        raise ConfigError("--backend must be analytic, direct or ode")
    if merged["shots"] < 1:
        raise ConfigError("--shots must be at least 1")
    if merged["workers"] < 1:
        raise ConfigError("--workers must be at least 1")
    if cmd == "montecarlo":
        if merged["trials"] < 100:
            raise ConfigError("--trials must be at least 100")
        if points < 3 or not gmin < omega0 < gmax:
            raise ConfigError("montecarlo needs >= 3 grid points around omega0")
    if cmd == "fwhm" and points < 3:
        raise ConfigError("fwhm needs at least 3 grid points")
    if merged["tol"] is not None and not merged["tol"] > 0:
        raise ConfigError("--tol must be positive")
    if not merged["window"] > 0:
        raise ConfigError("--window must be positive")
    return RunConfig(
        command=cmd, tau=tau, rabi=rabi, omega0=omega0, n_half=merged["n_half"], phase=phase,
        grid_min=gmin, grid_max=gmax, grid_points=points, shots=merged["shots"],
        trials=merged["trials"], seed=merged["seed"], format=merged["format"], out=merged["out"],
        backend=merged["backend"], tol=merged["tol"], window=merged["window"], workers=merged["workers"],
    )


# ---------------------------------------------------------------- commands


def cmd_profile(cfg):
    omega = cfg.grid
    u = _propagator(cfg.sequence.at_drive(omega), cfg)
    p0 = np.abs(np.atleast_1d(u.a)) ** 2
    det = omega - cfg.omega0
    return {"omega": omega, "detuning": det, "tau_detuning": cfg.tau * det, "p0": p0, "p1": 1.0 - p0}


def _propagator(seq, cfg):
    if cfg.backend == "ode":
        return integrate_sequence(seq, IntegrationConfig(window_half_width=cfg.window))
    if cfg.backend == "direct":
        return sequence_propagator_direct(seq)
    return sequence_propagator(seq, "analytic")


def cmd_fisher(cfg):
    det = cfg.grid - cfg.omega0
    seq = cfg.sequence.at_detuning(det)
    if cfg.backend == "ode":
        from .fisher import ode_fisher

        rep = ode_fisher(seq, IntegrationConfig(window_half_width=cfg.window, rel_tol=1e-12, abs_tol=1e-14))
    elif cfg.backend == "direct":
        rep = sequence_fisher(seq, "finite_difference")
    else:
        rep = sequence_fisher(seq)
    n = det.size
    return {
        "detuning": det,
        "tau_detuning": cfg.tau * det,
        "cfi": np.broadcast_to(rep.cfi, (n,)),
        "qfi": np.broadcast_to(rep.qfi, (n,)),
        "method": [rep.method_tag] * n,
    }


def cmd_fwhm(cfg):
    prof = probability_profile(cfg.sequence, cfg.grid)
    width = fwhm(prof)
    return {
        "n_half": [cfg.n_half],
        "phase": [cfg.phase],
        "fwhm": [width],
        "tau_fwhm": [cfg.tau * width],
        "curvature": [curvature_on_resonance(cfg.sequence)],
    }


def cmd_montecarlo(cfg):
    protocol = ScanProtocol(cfg.omega0, cfg.grid, cfg.shots, cfg.sequence, cfg.seed)
    res = run_experiment(protocol, cfg.trials, workers=cfg.workers)
    fisher = res.pop("fisher_information")
    rows = [r.as_dict() for r in res.values()]
    table = {k: [r[k] for r in rows] for k in rows[0]}
    table["fisher_information"] = [fisher] * len(rows)
    return table


# ---------------------------------------------------------------- verify


def _rel(x, y):
    x, y = np.asarray(x), np.asarray(y)
    return float(np.max(np.abs(x - y) / np.maximum(np.abs(y), 1e-300)))


def _check_analytic_vs_ode(cfg):
    area, td = np.meshgrid(np.linspace(0, 4, 9), np.linspace(-6, 6, 9), indexing="ij")
    p = PulseParams.from_dimensionless(area, td, width=cfg.tau)
    u = cayley_klein(p)
    o = integrate_pulse(p, IntegrationConfig(window_half_width=cfg.window))
    return max(np.max(np.abs(u.a - o.a)), np.max(np.abs(u.b - o.b)))


def _check_closed_form(cfg):
    area, td = np.meshgrid(np.linspace(0, 4, 50), np.linspace(-6, 6, 50), indexing="ij")
    p = PulseParams.from_dimensionless(area, td, width=cfg.tau)
    u = cayley_klein(p)
    p0, p1 = transition_probabilities(p)
    return max(np.max(np.abs(np.abs(u.a) ** 2 - p0)), np.max(np.abs(np.abs(u.b) ** 2 - p1)))


def _check_chebyshev(cfg):
    td = np.linspace(-6, 6, 41) / cfg.tau
    worst = 0.0
    for phase in (0.0, np.pi):
        for n in range(11):
            seq = SequenceSpec(n, phase, PulseParams(1 / cfg.tau, cfg.tau, td))
            c, d = sequence_propagator_chebyshev(seq), sequence_propagator_direct(seq)
            worst = max(worst, np.max(np.abs(c.a - d.a)), np.max(np.abs(c.b - d.b)))
        if phase == 0.0:
            for n in range(1, 11):
                seq = SequenceSpec(n, 0.0, PulseParams(1 / cfg.tau, cfg.tau, td))
                pw = same_phase_power(cayley_klein(seq.pulse), 2 * n + 1)
                c = sequence_propagator_chebyshev(seq)
                worst = max(worst, np.max(np.abs(pw.a - c.a)), np.max(np.abs(pw.b - c.b)))
    return worst


def _check_derivative(cfg):
    td = np.linspace(-3, 3, 25) / cfg.tau
    worst = 0.0
    for n, phase in ((0, 0.0), (1, np.pi), (1, 0.0), (2, np.pi)):
        seq = SequenceSpec(n, phase, PulseParams(1 / cfg.tau, cfg.tau, td))
        _, da, db = sequence_derivative(seq, "analytic")
        _, fa, fb = sequence_derivative(seq, "finite_difference")
        scale = max(np.max(np.abs(da)), np.max(np.abs(db)))
        worst = max(worst, np.max(np.abs(da - fa)) / scale, np.max(np.abs(db - fb)) / scale)
    return worst


def _check_composite_ode(cfg):
    td = np.linspace(-3, 3, 7) / cfg.tau
    ic = IntegrationConfig(window_half_width=cfg.window)
    worst = 0.0
    for phase in (0.0, np.pi):
        seq = SequenceSpec(1, phase, PulseParams(1 / cfg.tau, cfg.tau, td))
        c, o = sequence_propagator_chebyshev(seq), integrate_sequence(seq, ic)
        worst = max(worst, np.max(np.abs(c.a - o.a)), np.max(np.abs(c.b - o.b)))
    return worst


def _check_resonance(cfg):
    tau = cfg.tau
    worst = 0.0
    for n in range(6):
        worst = max(worst, _rel(fisher_on_resonance_composite(n, np.pi, tau), (np.pi * tau) ** 2))
        worst = max(worst, _rel(fisher_on_resonance_composite(n, 0.0, tau), (np.pi * tau / (2 * n + 1)) ** 2))
    return worst


# name, check, default tolerance
VERIFY_CHECKS = (
    ("analytic_vs_ode", _check_analytic_vs_ode, 1e-7),
    ("closed_form_probabilities", _check_closed_form, 1e-10),
    ("chebyshev_vs_direct", _check_chebyshev, 1e-10),
    ("derivative_analytic_vs_fd", _check_derivative, 1e-6),
    ("composite_vs_ode", _check_composite_ode, 1e-7),
    ("resonance_constants", _check_resonance, 1e-6),
)


def cmd_verify(cfg):
    table = {"check": [], "max_deviation": [], "tolerance": [], "passed": [], "message": []}
    for name, fn, tol in VERIFY_CHECKS:
        tol = tol if cfg.tol is None else cfg.tol
        try:
            dev = fn(cfg)
            ok, msg = bool(dev <= tol), ""
        except SechFisherError as exc:
            dev, ok, msg = float("nan"), False, f"{type(exc).__name__}: {exc}"
        table["check"].append(name)
        table["max_deviation"].append(float(dev))
        table["tolerance"].append(float(tol))
        table["passed"].append(ok)
        table["message"].append(msg)
    return table


def format_verify_table(table):
    lines = [f"{'check':<28}{'max deviation':>16}{'tolerance':>12}  result"]
    for i, name in enumerate(table["check"]):
        res = "PASS" if table["passed"][i] else "FAIL"
        lines.append(f"{name:<28}{table['max_deviation'][i]:>16.3e}{table['tolerance'][i]:>12.1e}  {res}")
        if table["message"][i]:
            lines.append(f"    {table['message'][i]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- output


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating, int, np.integer)):
        return "%.17g" % v
    return str(v)


def to_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(table)
    w.writerow(cols)
    for row in zip(*(table[c] for c in cols)):
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else None
    return v


def provenance(cfg):
    return {
        "package": "sechfisher",
        "version": __version__,
        "command": cfg.command,
        "model": {
            "pulse": "Rosen-Zener sech envelope, closed-form Cayley-Klein propagator",
            "train": "2N+1 pulses, alternating carrier phase, fixed total duration",
            "cfi": "two-outcome (ground/excited) population measurement",
            "qfi": "pure-state 4(<dpsi|dpsi> - |<psi|dpsi>|^2)",
            "crb": "1/(shots * sum of CFI over scan grid)",
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def to_json(table, cfg):
    doc = {
        "config": _jsonable(cfg.as_dict()),
        "provenance": provenance(cfg),
        "data": {k: _jsonable(v) for k, v in table.items()},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text, cfg):
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and output")
    g.add_argument("--config", metavar="PATH", help="key=value file; flags override it")
    g.add_argument("--tau", type=float, help="pulse duration tau (time unit, default 1)")
    g.add_argument("--rabi", type=float, help="single-pulse peak Rabi frequency (default 1/tau, a pi-pulse)")
    g.add_argument("--omega0", type=float, help="atomic resonance frequency (default 0)")
    g.add_argument("--n-half", dest="n_half", type=int, help="N; the train has 2N+1 pulses")
    g.add_argument("--phase", help="carrier-phase step: 0, pi, pi/k or radians")
    g.add_argument("--grid-min", dest="grid_min", type=float, help="lowest drive frequency")
    g.add_argument("--grid-max", dest="grid_max", type=float, help="highest drive frequency")
    g.add_argument("--grid-points", dest="grid_points", type=int, help="number of grid frequencies")
    g.add_argument("--shots", type=int, help="repetitions per grid frequency (montecarlo)")
    g.add_argument("--trials", type=int, help="Monte Carlo trials, >= 100")
    g.add_argument("--seed", type=int, help="root random seed")
    g.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    g.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    g.add_argument("--backend", choices=("analytic", "direct", "ode"), help="propagator route")
    g.add_argument("--tol", type=float, help="override every verify tolerance")
    g.add_argument("--window", type=float, help="ODE half-window in units of tau (default 25)")
    g.add_argument("--workers", type=int, help="worker processes for montecarlo")

    parser = argparse.ArgumentParser(prog="sechfisher", description="Sech-pulse resonance metrology.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "profile": "ground/excited populations over the drive grid",
        "fisher": "classical and quantum Fisher information over the grid",
        "fwhm": "full width at half depth of the ground-state dip",
        "montecarlo": "simulated frequency scans against the Cramer-Rao bound",
        "verify": "cross-check closed forms against independent routes",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


_HANDLERS = {
    "profile": cmd_profile,
    "fisher": cmd_fisher,
    "fwhm": cmd_fwhm,
    "montecarlo": cmd_montecarlo,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"sechfisher: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = _HANDLERS[cfg.command](cfg)
    except (SechFisherError, ValueError) as exc:
        print(f"sechfisher: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.command == "verify":
        sys.stdout.write(format_verify_table(table))
        if cfg.out is not None or cfg.format == "json":
            text = to_json(table, cfg)
            if cfg.out is not None:
                _emit(text, cfg)
            else:
                sys.stdout.write(text)
        return EXIT_OK if all(table["passed"]) else EXIT_FAIL
    text = to_json(table, cfg) if cfg.format == "json" else to_csv(table)
    _emit(text, cfg)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
