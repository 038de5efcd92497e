"""Command-line interface: ``cc4 <subcommand> [options]``.

Exit codes: 0 success, 1 error, 2 no solution, 3 configuration not
central, 64 usage error, 66 unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cocircular, dipole, nonzero_multiplier, simulate, zero_multiplier
from .core import Configuration, fit_multiplier
from .errors import CentralConfigError
from .serialize import csv_text, dumps, loads

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_SOLUTION = 2
EXIT_NOT_CENTRAL = 3
EXIT_USAGE = 64
EXIT_INPUT = 66

DEFAULT_CERT_TOL = 1e-10
TOL_ENV = "CC4_TOL"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunSettings:
    bisect_tol: float = zero_multiplier.BISECT_RTOL
    cert_tol: float = DEFAULT_CERT_TOL
    circle_tol: float = cocircular.TOL_CIRCLE
    fmt: str | None = None  # None picks the subcommand's natural format
    jobs: int = 1

    def __post_init__(self):
        for name in ("bisect_tol", "cert_tol", "circle_tol"):
            val = getattr(self, name)
            if not 0.0 < val < 1e-2:
                raise UsageError(f"{name} must lie in (0, 1e-2), got {val}")
        if self.fmt not in (None, "json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")

    def format_for(self, default: str) -> str:
        return self.fmt or default


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _finite(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return val


def _global_options(p, suppress: bool, with_tol: bool = True):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    if with_tol:
        p.add_argument("--tol", type=_finite, help="certification tolerance (default 1e-10 or $CC4_TOL)", **kw)
    p.add_argument("--bisect-tol", type=_finite, help="relative bisection tolerance", **kw)
    p.add_argument("--format", choices=("json", "csv"), help="output format", **kw)
    p.add_argument("--jobs", type=int, help="worker processes for sweeps", **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cc4", description="Four-body central configurations with masses x, -x, y, -y.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve for given masses")
    _global_options(p, suppress=True)
    p.add_argument("--x", type=_finite, required=True)
    p.add_argument("--y", type=_finite, required=True)
    p.add_argument("--multiplier", choices=("zero", "nonzero", "all"), default="all")

    p = sub.add_parser("verify", help="certify a configuration file")
    _global_options(p, suppress=True)
    p.add_argument("path")

    p = sub.add_parser("sweep", help="solve over a grid of masses")
    _global_options(p, suppress=True)
    p.add_argument("--x", required=True, help="a:b:n or a single value")
    p.add_argument("--y", required=True, help="c:d:m or a single value")
    p.add_argument("--multiplier", choices=("zero", "nonzero", "all"), default="nonzero")

    p = sub.add_parser("dipole", help="sample the dipole field on a grid")
    _global_options(p, suppress=True)
    p.add_argument("--umin", type=_finite, default=-2.0)
    p.add_argument("--umax", type=_finite, default=2.0)
    p.add_argument("--vmin", type=_finite, default=-2.0)
    p.add_argument("--vmax", type=_finite, default=2.0)
    p.add_argument("--steps", type=int, default=21)

    p = sub.add_parser("simulate", help="integrate a configuration released from rest")
    _global_options(p, suppress=True, with_tol=False)
    p.add_argument("config")
    p.add_argument("--t-end", type=_finite, default=simulate.DEFAULT_T_END)
    p.add_argument("--tol", dest="sim_tol", type=_finite, default=simulate.DEFAULT_TOL,
                   help="integrator tolerance")
    p.add_argument("--csv", dest="csv_path", help="write the trajectory CSV here")
    p.add_argument("--summary", dest="summary_path", help="write the summary JSON here")

    p = sub.add_parser("cocircular", help="co-circular gap for four angles")
    _global_options(p, suppress=True)
    p.add_argument("--angles", required=True, help="a1,a2,a3,a4 in degrees")
    p.add_argument("--radius", type=_finite, default=1.0)
    p.add_argument("--circle-tol", type=_finite, default=cocircular.TOL_CIRCLE)
    return parser


def _settings(args) -> RunSettings:
    cert = args.tol
    if cert is None:
        env = os.environ.get(TOL_ENV)
        if env:
            try:
                cert = _finite(env)
            except argparse.ArgumentTypeError as exc:
                raise UsageError(f"{TOL_ENV}: {exc}") from None
        else:
            cert = DEFAULT_CERT_TOL
    return RunSettings(
        bisect_tol=args.bisect_tol if args.bisect_tol is not None else zero_multiplier.BISECT_RTOL,
        cert_tol=cert,
        circle_tol=getattr(args, "circle_tol", cocircular.TOL_CIRCLE),
        fmt=args.format,
        jobs=args.jobs if args.jobs is not None else 1,
    )


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _config_from(doc, where: str) -> Configuration:
    try:
        return Configuration.from_dict(doc)
    except (ValueError, TypeError, CentralConfigError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _extract_configurations(doc) -> list:
    """Configurations in a configuration, solution or solve-output document."""
    if isinstance(doc, dict):
        if "masses" in doc and "positions" in doc:
            return [_config_from(doc, "configuration")]
        if "configuration" in doc:
            return [_config_from(doc["configuration"], "configuration")]
        found = []
        for key in ("zero", "solutions", "nonzero"):
            part = doc.get(key)
            if isinstance(part, dict):
                part = [part]
            if isinstance(part, list):
                for item in part:
                    if isinstance(item, dict) and item.get("result") == "no_solution":
                        continue
                    found.extend(_extract_configurations(item))
        if found:
            return found
    raise InputError("no configuration found (expected 'masses' and 'positions')")


# -- solve -----------------------------------------------------------------

SOLUTION_COLUMNS = ("x", "y", "branch", "u", "v", "xi_fit", "residual")


def _check_masses(x, y):
    if x == 0.0 or y == 0.0:
        raise UsageError("masses must be nonzero")


def _solution_rows(x, y, multiplier, rtol) -> list:
    rows = []
    if multiplier in ("zero", "all"):
        z = zero_multiplier.solve_zero(x, y, rtol)
        if isinstance(z, zero_multiplier.NoSolution):
            rows.append((x, y, "no_solution", "", "", "", ""))
        else:
            rows.append((x, y, "zero", z.u, z.v, z.report.xi_fit, z.report.max_pair_residual))
    if multiplier in ("nonzero", "all"):
        for k, s in enumerate(nonzero_multiplier.solve_nonzero(x, y, rtol), start=1):
            rows.append((x, y, f"nonzero_{k}", s.u, s.v, s.report.xi_fit, s.report.max_pair_residual))
    return rows


def _certify(sol, tol) -> list:
    problems = []
    rep = sol.report
    if not rep.max_pair_residual < tol:
        problems.append(f"pair residual {rep.max_pair_residual:.3g} exceeds {tol:g}")
    if isinstance(sol, zero_multiplier.ZeroMultSolution) and not abs(rep.xi_fit) < tol:
        problems.append(f"multiplier {rep.xi_fit:.3g} is not zero to {tol:g}")
    return problems


def run_solve(args, settings: RunSettings, out, err) -> int:
    _check_masses(args.x, args.y)
    status = EXIT_OK
    problems = []
    zero_doc = None
    nonzero_docs = None
    if args.multiplier in ("zero", "all"):
        z = zero_multiplier.solve_zero(args.x, args.y, settings.bisect_tol)
        if isinstance(z, zero_multiplier.NoSolution):
            if args.multiplier == "zero":
                status = EXIT_NO_SOLUTION
        else:
            problems += _certify(z, settings.cert_tol)
        zero_doc = z.to_dict()
    if args.multiplier in ("nonzero", "all"):
        sols = nonzero_multiplier.solve_nonzero(args.x, args.y, settings.bisect_tol)
        for s in sols:
            problems += _certify(s, settings.cert_tol)
        nonzero_docs = [s.to_dict() for s in sols]

    if settings.format_for("json") == "csv":
        out.write(csv_text(SOLUTION_COLUMNS,
                           _solution_rows(args.x, args.y, args.multiplier, settings.bisect_tol)))
    elif args.multiplier == "zero":
        out.write(dumps(zero_doc))
    elif args.multiplier == "nonzero":
        out.write(dumps({"result": "solutions", "multiplier": "nonzero",
                         "count": len(nonzero_docs), "solutions": nonzero_docs}))
    else:
        out.write(dumps({"result": "solutions", "zero": zero_doc, "nonzero": nonzero_docs}))
    if problems:
        for msg in problems:
            err.write(f"cc4: certification failed: {msg}\n")
        return EXIT_ERROR
    return status


# -- verify ----------------------------------------------------------------

def run_verify(args, settings: RunSettings, out, err) -> int:
    configs = _extract_configurations(_read_json(args.path))
    docs = []
    central = True
    for cfg in configs:
        try:
            rep = fit_multiplier(cfg)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        ok = rep.max_pair_residual < settings.cert_tol
        central = central and ok
        docs.append({"central": ok, "tolerance": settings.cert_tol, **rep.to_dict()})
    if settings.format_for("json") == "csv":
        rows = [(k + 1, str(d["central"]).lower(), d["xi_fit"], d["max_pair_residual"])
                for k, d in enumerate(docs)]
        out.write(csv_text(("index", "central", "xi_fit", "max_pair_residual"), rows))
    else:
        out.write(dumps(docs[0] if len(docs) == 1 else {"reports": docs}))
    if not central:
        err.write("cc4: configuration is not central within the tolerance\n")
        return EXIT_NOT_CENTRAL
    return EXIT_OK


# -- sweep -----------------------------------------------------------------

def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` gives n evenly spaced values from a to b; ``a`` gives one value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([_finite(parts[0])])
        if len(parts) == 3:
            a, b, n = _finite(parts[0]), _finite(parts[1]), int(parts[2])
            if n < 1:
                raise UsageError(f"range {text!r} needs at least one point")
            return np.linspace(a, b, n)
    except (argparse.ArgumentTypeError, ValueError) as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    raise UsageError(f"bad range {text!r}: expected a:b:n")


def _sweep_task(task):
    x, y, multiplier, rtol = task
    return _solution_rows(x, y, multiplier, rtol)


def run_sweep(args, settings: RunSettings, out, err) -> int:
    xs = parse_range(args.x)
    ys = parse_range(args.y)
    tasks = [(float(x), float(y), args.multiplier, settings.bisect_tol) for x in xs for y in ys]
    for x, y, *_ in tasks:
        _check_masses(x, y)
    if settings.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=settings.jobs) as pool:
            chunks = list(pool.map(_sweep_task, tasks))
    else:
        chunks = [_sweep_task(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    if settings.format_for("csv") == "csv":
        out.write(csv_text(SOLUTION_COLUMNS, rows))
    else:
        out.write(dumps([{k: (None if v == "" else v) for k, v in zip(SOLUTION_COLUMNS, row)}
                         for row in rows]))
    return EXIT_OK


# -- dipole ----------------------------------------------------------------

DIPOLE_COLUMNS = ("u", "v", "gamma_u", "gamma_v", "jacobian_det")


def run_dipole(args, settings: RunSettings, out, err) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    if args.umin > args.umax or args.vmin > args.vmax:
        raise UsageError("grid bounds must satisfy min <= max")
    rows = [(s.point.x, s.point.y, s.field.x, s.field.y, s.jacobian_det)
            for s in dipole.field_grid(args.umin, args.umax, args.vmin, args.vmax, args.steps)]
    if settings.format_for("csv") == "csv":
        out.write(csv_text(DIPOLE_COLUMNS, rows))
    else:
        out.write(dumps([dict(zip(DIPOLE_COLUMNS, row)) for row in rows]))
    return EXIT_OK


# -- simulate --------------------------------------------------------------

def trajectory_csv(traj: simulate.Trajectory, fit: simulate.HomotheticFit) -> str:
    n = traj.positions.shape[1]
    header = ["t"]
    header += [f"{c}{i}" for i in range(1, n + 1) for c in ("x", "y")]
    header += [f"{c}{i}" for i in range(1, n + 1) for c in ("vx", "vy")]
    header += ["alpha", "shape_dev"]
    rows = []
    for k, t in enumerate(traj.times):
        rows.append([float(t), *map(float, traj.positions[k].ravel()),
                     *map(float, traj.velocities[k].ravel()),
                     float(fit.alpha[k]), float(fit.shape_deviation[k])])
    return csv_text(header, rows)


def run_simulate(args, settings: RunSettings, out, err) -> int:
    if not args.t_end > 0.0:
        raise UsageError("--t-end must be positive")
    if not 0.0 < args.sim_tol < 1e-2:
        raise UsageError("--tol must lie in (0, 1e-2)")
    configs = _extract_configurations(_read_json(args.config))
    if len(configs) != 1:
        raise InputError(f"{args.config} holds {len(configs)} configurations; simulate needs one")
    cfg = configs[0]
    traj = simulate.integrate(cfg, args.t_end, args.sim_tol)
    fit = simulate.homothetic_fit(traj)
    e0 = float(traj.energy[0])
    summary = {
        "samples": int(len(traj.times)),
        "t_final": float(traj.times[-1]),
        "close_approach": traj.close_approach,
        "xi_fit": fit_multiplier(cfg).xi_fit if cfg.n >= 3 else None,
        "energy_initial": e0,
        "energy_drift": float(np.max(np.abs(traj.energy - e0))),
        **fit.to_dict(),
    }
    table = trajectory_csv(traj, fit)
    summary_text = dumps(summary)
    try:
        if args.csv_path:
            with open(args.csv_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(table)
        if args.summary_path:
            with open(args.summary_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(summary_text)
    except OSError as exc:
        raise InputError(f"cannot write output: {exc.strerror or exc}") from None
    if settings.format_for("csv") == "csv":
        if not args.csv_path:
            out.write(table)
        if not args.summary_path:
            err.write(summary_text)
    else:
        out.write(summary_text)
    return EXIT_OK


# -- cocircular ------------------------------------------------------------

def run_cocircular(args, settings: RunSettings, out, err) -> int:
    try:
        angles = [_finite(a) for a in args.angles.split(",")]
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"--angles: {exc}") from None
    if len(angles) != 4:
        raise UsageError("--angles needs exactly four comma-separated values")
    if not args.radius > 0.0:
        raise UsageError("--radius must be positive")
    cfg = cocircular.on_circle(angles, args.radius)
    rep = cocircular.cocircular_gap(cfg, settings.circle_tol)
    doc = {"angles_deg": angles, "radius": args.radius, **rep.to_dict()}
    if settings.format_for("json") == "csv":
        out.write(csv_text(("ordering", "arc_normalized", "gap"),
                           [(" ".join(map(str, rep.ordering)), str(rep.arc_normalized).lower(), rep.gap)]))
    else:
        out.write(dumps(doc))
    return EXIT_OK


COMMANDS = {
    "solve": run_solve,
    "verify": run_verify,
    "sweep": run_sweep,
    "dipole": run_dipole,
    "simulate": run_simulate,
    "cocircular": run_cocircular,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = _settings(args)
        return COMMANDS[args.command](args, settings, out, err)
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"cc4: error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        err.write(f"cc4: {exc}\n")
        return EXIT_INPUT
    except (CentralConfigError, ValueError, ArithmeticError) as exc:
        err.write(f"cc4: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
