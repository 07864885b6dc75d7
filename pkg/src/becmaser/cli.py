"""Command-line front end.

Subcommands: traj, fixed-points, bifurcation, empty_landscape, landscape, reduce.
Exit codes: 0 ok, 2 bad input, 3 early termination, 4 no transition found.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .bifurcation import (NoTransitionError, critical_parameter, empty_landscape, landscape, sweep,
                          with_parameter)
from .dynamics import IntegratorConfig, Termination, integrate
from .io import csv_text, json_text
from .models import (AsymmetricDoubleWellModel, DoubleWellModel, ModelError, PhaseState,
                     PhysicalParams, WeakRegimeModel, WeakRegimeWarning, reduce_physical)
from .stationary import find_fixed_points

EXIT_OK, EXIT_INPUT, EXIT_EARLY, EXIT_NONE = 0, 2, 3, 4
MODELS = ("double-well", "asym-double-well", "weak", "physical")


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, model_required=True, default_format="csv") -> None:
    p.add_argument("--config", help="flat key=value file; flags on the command line win")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--workers", type=int, default=1, help="parallelism degree")
    m = p.add_argument_group("model")
    m.add_argument("--model", choices=MODELS, required=model_required)
    m.add_argument("--lambda", "--lambda-ratio", dest="coupling_ratio", type=float,
                   help="coupling ratio Lambda")
    m.add_argument("--delta", type=float, help="detuning Delta")
    m.add_argument("--k", type=float, help="excitation ratio k")
    m.add_argument("--printed-eq19", action="store_true",
                   help="use the +3z^2 phase equation variant (not energy conserving)")
    ph = p.add_argument_group("physical parameters (--model physical)")
    ph.add_argument("--omega0", type=float)
    ph.add_argument("--omega-a", type=float)
    ph.add_argument("--g", type=float)
    ph.add_argument("--kappa", type=float, default=0.0)
    ph.add_argument("--chi", type=float, default=0.0)
    ph.add_argument("--xi", type=float, default=0.0)
    ph.add_argument("--ensemble-size", type=int)
    ph.add_argument("--threshold", type=float, default=0.01,
                    help="weak-regime warning threshold for eta and nu")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becmaser",
        description="Semiclassical dynamics of a cavity-driven two-species condensate.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("traj", help="integrate one trajectory")
    _common(p)
    p.add_argument("--z0", type=float, required=True)
    p.add_argument("--phi0", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--record-stride", type=int, default=1)
    p.add_argument("--boundary-margin", type=float, default=1e-6)
    p.add_argument("--adaptive", action="store_true", help="embedded 8(5,3) pair, rtol 1e-9")

    p = sub.add_parser("fixed-points", help="stationary states at Phi = 0 and pi")
    _common(p)
    p.add_argument("--grid", type=int, default=4096)

    p = sub.add_parser("bifurcation", help="parameter sweep and transition detection")
    _common(p)
    p.add_argument("--sweep", choices=("lambda", "k", "delta"), required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--tol", type=float, help="bisection tolerance (default 1e-9 of range)")
    p.add_argument("--count-phi", choices=("0", "pi"),
                   help="stationary phase whose stable points are counted "
                        "(default pi for double-well, 0 otherwise)")
    p.add_argument("--report", help="path for the transition report JSON (default stderr)")
    p.add_argument("--grid", type=int, default=4096)

    p = sub.add_parser("landscape", help="normalised energy over the (Phi, z) plane")
    _common(p)
    p.add_argument("--z-samples", type=int, default=201)
    p.add_argument("--phi-samples", type=int, default=201)

    p = sub.add_parser("reduce", help="physical constants -> effective parameters")
    _common(p, model_required=False, default_format="json")
    return parser


def read_config(path: str) -> list[str]:
    """Turn a key=value file into command-line tokens."""
    tokens = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.lstrip("-").replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            tokens.append(f"{flag}={value}")
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    for i, tok in enumerate(argv):
        path = None
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
        if path is not None:
            # file values go first so explicit flags override them
            return argv[:1] + read_config(path) + argv[1:]
    return argv


# --------------------------------------------------------------------------
# model construction
# --------------------------------------------------------------------------

_FLAG = {"coupling_ratio": "--lambda"}


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join(_FLAG.get(n, "--" + n.replace("_", "-")) for n in missing)
        raise InputError(f"model {args.model} requires {flags}")


def physical_params(args) -> PhysicalParams:
    _need(args, "omega0", "omega_a", "g")
    return PhysicalParams(
        field_frequency=args.omega0, atom_frequency=args.omega_a, coupling=args.g,
        kerr=args.kappa, parametric=args.chi, intra_ensemble=args.xi,
        ensemble_size=args.ensemble_size if args.ensemble_size is not None else 1)


def build_model(args):
    if args.model == "double-well":
        _need(args, "coupling_ratio")
        return DoubleWellModel(args.coupling_ratio)
    if args.model == "asym-double-well":
        _need(args, "coupling_ratio", "delta")
        return AsymmetricDoubleWellModel(args.delta, args.coupling_ratio)
    if args.model == "weak":
        _need(args, "coupling_ratio", "delta", "k")
        return WeakRegimeModel(args.delta, args.coupling_ratio, args.k,
                               printed_eq19=args.printed_eq19)
    if args.model == "physical":
        _need(args, "k")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WeakRegimeWarning)
            red = reduce_physical(physical_params(args), args.threshold)
        for note in red.warnings:
            print(f"warning: {note}", file=sys.stderr)
        return red.model(args.k, printed_eq19=args.printed_eq19)
    raise InputError(f"unknown model {args.model!r}")


def _write(args, text: str, path: str | None = None) -> None:
    path = path if path is not None else args.out
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_traj(args) -> int:
    model = build_model(args)
    config = IntegratorConfig(t_end=args.t_end, dt=args.dt, record_stride=args.record_stride,
                              boundary_margin=args.boundary_margin, adaptive=args.adaptive)
    try:
        traj = integrate(model, PhaseState(args.z0, args.phi0), config)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    header = ["t", "z", "phi", "energy"]
    cols = [traj.times, traj.z, traj.phi, traj.energies]
    if isinstance(model, WeakRegimeModel) and args.ensemble_size is not None:
        header.append("n_photon")
        cols.append(0.5 * args.ensemble_size * (model.excitation_ratio - traj.z))
    comments = []
    if traj.termination is not Termination.COMPLETED:
        comments.append(f"termination={traj.termination.value}")
    if args.format == "json":
        _write(args, json_text({
            "columns": header,
            "rows": [list(r) for r in zip(*cols)],
            "termination": traj.termination.value,
        }))
    else:
        _write(args, csv_text(header, zip(*cols), comments))
    return EXIT_OK if traj.termination is Termination.COMPLETED else EXIT_EARLY


def _fp_record(fp):
    return {"phi_star": fp.phi_star, "z_star": fp.z_star,
            "stability": fp.stability.value, "branch": fp.branch.value}


def cmd_fixed_points(args) -> int:
    model = build_model(args)
    fps = find_fixed_points(model, args.grid)
    if args.format == "json":
        _write(args, json_text([_fp_record(fp) for fp in fps]))
    else:
        _write(args, csv_text(["phi_star", "z_star", "stability", "branch"],
                              [(fp.phi_star, fp.z_star, fp.stability, fp.branch) for fp in fps]))
    return EXIT_OK


def _report_record(rep):
    return {
        "parameter_name": rep.parameter_name,
        "critical_value": rep.critical_value,
        "bracket": list(rep.bracket),
        "pre_count": rep.pre_count,
        "post_count": rep.post_count,
        "pre_stable": rep.pre_stable,
        "post_stable": rep.post_stable,
        "new_saddle": None if rep.new_saddle is None else _fp_record(rep.new_saddle),
        "estimate_kc": rep.estimate_kc,
    }


def cmd_bifurcation(args) -> int:
    if not args.lo < args.hi:
        raise InputError("--from must be smaller than --to")
    if args.samples < 2:
        raise InputError("--samples must be >= 2")
    name = args.sweep
    # the swept parameter need not be given; it starts at the range's lower end
    dest = {"lambda": "coupling_ratio", "k": "k", "delta": "delta"}[name]
    if getattr(args, dest) is None:
        setattr(args, dest, args.lo)
    model = build_model(args)
    try:
        with_parameter(model, name, args.lo)
    except TypeError:
        raise InputError(f"model {args.model} has no parameter {name!r}") from None
    branches = sweep(model, name, args.lo, args.hi, args.samples, n=args.grid,
                     workers=max(1, args.workers))
    rows = [(br.branch_id, p, fp.phi_star, fp.z_star, fp.stability)
            for br in branches for p, fp in zip(br.parameter_values, br.points)]
    if args.count_phi is None:
        phi_star = math.pi if isinstance(model, DoubleWellModel) else 0.0
    else:
        phi_star = math.pi if args.count_phi == "pi" else 0.0
    tol = args.tol if args.tol is not None else 1e-9 * (args.hi - args.lo)
    try:
        report = critical_parameter(model, name, args.lo, args.hi, tol, phi_star, args.grid)
    except NoTransitionError as exc:
        report = None
        diagnostic = str(exc)

    header = ["branch_id", "parameter", "phi_star", "z_star", "stability"]
    if args.format == "json":
        _write(args, json_text({
            "branches": [dict(zip(header, r)) for r in rows],
            "report": None if report is None else _report_record(report),
        }))
    else:
        _write(args, csv_text(header, rows))
        if report is not None:
            text = json_text(_report_record(report))
            if args.report:
                Path(args.report).write_text(text)
            else:
                sys.stderr.write(text)
    if report is None:
        print(f"no transition: {diagnostic}", file=sys.stderr)
        return EXIT_NONE
    return EXIT_OK


def cmd_landscape(args) -> int:
    if args.model not in ("weak", "physical"):
        raise InputError("landscape requires --model weak or physical")
    if args.z_samples < 2 or args.phi_samples < 2:
        raise InputError("landscape needs at least two samples per axis")
    z = np.linspace(-1.0, 1.0, args.z_samples)
    phi = np.linspace(-math.pi, math.pi, args.phi_samples)
    if args.k is not None and args.k < -1.0:
        if args.model == "weak":
            _need(args, "coupling_ratio", "delta")
        # no state satisfies k - z >= 0; the grid is simply empty
        land = empty_landscape(z, phi)
    else:
        land = landscape(build_model(args), z, phi)
    rows = [(p, zj, land.normalized[i, j], land.defined[i, j])
            for i, p in enumerate(phi) for j, zj in enumerate(z)]
    if args.format == "json":
        _write(args, json_text({
            "columns": ["phi", "z", "energy_norm", "defined"],
            "rows": [[p, zj, e, bool(d)] for p, zj, e, d in rows],
            "raw_min": land.raw_min, "raw_max": land.raw_max,
        }))
    else:
        comments = [f"raw_min={'nan' if land.raw_min is None else f'{land.raw_min:.16e}'}",
                    f"raw_max={'nan' if land.raw_max is None else f'{land.raw_max:.16e}'}"]
        _write(args, csv_text(["phi", "z", "energy_norm", "defined"], rows, comments))
    return EXIT_OK


def cmd_reduce(args) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WeakRegimeWarning)
        args.model = args.model or "physical"
        red = reduce_physical(physical_params(args), args.threshold)
    eff = red.effective
    record = {
        "reduction": {"eta": eff.eta, "nu": eff.nu, "omega": eff.omega,
                      "delta": eff.delta, "lambda": eff.lambda_coupling},
        "model": {"Delta": red.detuning, "Lambda": red.coupling_ratio},
        "warnings": list(red.warnings),
    }
    if args.format == "csv":
        rows = [(f"reduction.{k}", v) for k, v in record["reduction"].items()]
        rows += [(f"model.{k}", v) for k, v in record["model"].items()]
        _write(args, csv_text(["key", "value"], rows, [f"warning={w}" for w in red.warnings]))
    else:
        _write(args, json_text(record))
    return EXIT_OK


COMMANDS = {
    "traj": cmd_traj,
    "fixed-points": cmd_fixed_points,
    "bifurcation": cmd_bifurcation,
    "landscape": cmd_landscape,
    "reduce": cmd_reduce,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except (OSError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ModelError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
