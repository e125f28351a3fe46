"""Command-line front end.

Every subcommand validates its flags before computing anything. Node labels
on the command line and in output files are 1-based; times are in units of
1/gamma.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import artifacts, plotting
from .analysis import (
    classical_carpet,
    first_revival_search,
    generate_carpet,
    limiting_distribution,
)
from .dynamics import TimeGrid, bloch_propagator, infinite_probability, quantum_propagator, transition_probability
from .errors import CTQWError
from .lattice import LatticeSpec
from .spectral import lattice_decomposition
from . import specialfn

CARPET_SAMPLES = 400
SERIES_SAMPLES = 2001

BESSEL_BOUNDS = {
    "recurrence": 1e-9,
    "normalization": 1e-10,
    "propagator_normalization": 1e-8,
}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, *, times=True, method=True, target=False):
    p.add_argument("--nodes", type=int, required=True, help="lattice size N")
    p.add_argument("--boundary", choices=["periodic", "reflecting"], default="periodic")
    p.add_argument("--gamma", type=float, default=1.0, help="transmission rate")
    p.add_argument("--start", type=int, default=1, help="starting node (1-based)")
    if target:
        p.add_argument("--target", type=int, help="target node (default: opposite node)")
    if times:
        p.add_argument("--t-min", type=float, default=None)
        p.add_argument("--t-max", type=float, default=None)
        p.add_argument("--samples", type=int, default=None)
    if method:
        p.add_argument("--method", choices=["spectral", "bloch", "infinite"], default="spectral")
    p.add_argument("--out", type=Path, help="output file (CSV goes to stdout if omitted)")
    p.add_argument("--format", choices=["csv", "pgm"], default="csv")
    p.add_argument("--scale", choices=["linear", "log"], default="linear")
    p.add_argument("--emit-plot", action="store_true", help="write a matplotlib script next to --out")
    p.add_argument("--render", action="store_true", help="render a PNG figure next to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctqw", description="Continuous-time quantum walks on 1-D lattices.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("carpet", help="quantum probabilities from one node to all nodes over time"))
    _common(sub.add_parser("classical", help="classical random-walk carpet"), method=False)
    _common(sub.add_parser("return-prob", help="return probability to the starting node"))
    _common(sub.add_parser("crossing", help="probability to reach a target node"), target=True)
    _common(sub.add_parser("limdist", help="limiting probability distribution"), times=False, method=False)
    _common(sub.add_parser("revival", help="first revival and per-mode revival times"), method=False)
    bessel = sub.add_parser("bessel-check", help="Bessel-function self-consistency residuals")
    bessel.add_argument("--out", type=Path)
    return parser


# -- validation ---------------------------------------------------------------


def _node(label: int, n: int, flag: str) -> int:
    if not 1 <= label <= n:
        raise UsageError(f"{flag} {label} outside 1..{n}")
    return label - 1


def _grid(args, t_min: float, t_max: float, samples: int) -> TimeGrid:
    t_min = t_min if args.t_min is None else args.t_min
    t_max = t_max if args.t_max is None else args.t_max
    samples = samples if args.samples is None else args.samples
    for name, value in (("--t-min", t_min), ("--t-max", t_max)):
        if not math.isfinite(value) or value < 0:
            raise UsageError(f"{name} must be a finite non-negative number")
    if t_max <= t_min:
        raise UsageError("--t-max must exceed --t-min")
    if samples < 2:
        raise UsageError("--samples must be at least 2")
    return TimeGrid(t_min, t_max, samples)


def _validate(args):
    spec = LatticeSpec(args.nodes, args.boundary, args.gamma)
    start = _node(args.start, spec.n_nodes, "--start")
    method = getattr(args, "method", "spectral")
    if method == "bloch" and not spec.periodic:
        raise UsageError("--method bloch requires --boundary periodic")
    if method == "bloch" and spec.n_nodes < 3:
        raise UsageError("--method bloch requires --nodes >= 3")
    if args.format == "pgm":
        if args.command not in ("carpet", "classical"):
            raise UsageError("--format pgm is only available for carpets")
        if args.out is None:
            raise UsageError("--format pgm requires --out")
        if args.emit_plot:
            raise UsageError("--emit-plot reads CSV; use --format csv")
    if args.command == "revival" and args.emit_plot:
        raise UsageError("--emit-plot is not available for revival reports")
    if (args.emit_plot or args.render) and args.out is None:
        raise UsageError("--emit-plot and --render require --out")
    return spec, start, method


# -- subcommands --------------------------------------------------------------


def _emit(args, text: str, kind: str, ylabel: str = "probability"):
    if args.out is None:
        sys.stdout.write(text)
        return
    artifacts.atomic_write(args.out, text)
    if args.emit_plot:
        artifacts.emit_plot_script(kind, args.out, ylabel=ylabel)


def _carpet(args, classical: bool) -> int:
    spec, start, method = _validate(args)
    if not classical and method == "infinite":
        raise UsageError("--method infinite applies to return-prob and crossing only")
    grid = _grid(args, 0.0, 10.0, CARPET_SAMPLES)
    carpet = classical_carpet(spec, start, grid) if classical else generate_carpet(spec, start, grid, method)
    if args.format == "pgm":
        artifacts.write_pgm(carpet, args.out, args.scale)
    else:
        _emit(args, artifacts.carpet_csv(carpet), "carpet")
    if args.render:
        plotting.render_carpet(carpet, args.out.with_suffix(".png"), log=args.scale == "log")
    return 0


def _series(spec: LatticeSpec, start: int, target: int, times: np.ndarray, method: str) -> np.ndarray:
    if method == "infinite":
        d = target - start
        if spec.periodic:
            # shortest way around the circle
            d = min(d % spec.n_nodes, -(-d % spec.n_nodes), key=abs)
        return infinite_probability(spec.gamma, times, d)
    if method == "bloch":
        amps = bloch_propagator(spec.n_nodes, spec.gamma, times, start)
    else:
        amps = quantum_propagator(lattice_decomposition(spec), spec.gamma, times, start)
    return transition_probability(amps[:, target])


def _probability_series(args, crossing: bool) -> int:
    spec, start, method = _validate(args)
    if crossing:
        default = (start + spec.n_nodes // 2) % spec.n_nodes
        target = default if args.target is None else _node(args.target, spec.n_nodes, "--target")
    else:
        target = start
    grid = _grid(args, 0.0, 100.0 if not crossing else 20.0, SERIES_SAMPLES)
    times = grid.times
    probs = _series(spec, start, target, times, method)
    _emit(args, artifacts.series_csv(times, probs), "series")
    if args.render:
        curves = {method: probs}
        if method != "infinite":
            curves["infinite lattice"] = _series(spec, start, target, times, "infinite")
        label = f"$\\pi_{{{target + 1},{start + 1}}}(t)$"
        plotting.render_series(times, curves, args.out.with_suffix(".png"), ylabel=label)
    return 0


def _limdist(args) -> int:
    spec, start, _ = _validate(args)
    dist = limiting_distribution(lattice_decomposition(spec), start)
    _emit(args, artifacts.limdist_csv(dist), "limdist")
    if args.render:
        plotting.render_limdist({f"N={spec.n_nodes}": dist}, args.out.with_suffix(".png"))
    return 0


def _revival(args) -> int:
    spec, start, _ = _validate(args)
    if spec.n_nodes < 3:
        raise UsageError("revival analysis needs --nodes >= 3")
    grid = _grid(args, spec.n_nodes / 2, 100.0, 1001)
    report = first_revival_search(spec, grid, start)
    lines = [
        "quantity,value",
        f"first_revival,{artifacts.fmt(report.detected_first_revival)}",
        f"peak_probability,{artifacts.fmt(report.detected_peak_probability)}",
        f"tau0,{artifacts.fmt(report.tau0)}",
    ]
    lines += [f"tau_{m},{artifacts.fmt(tau)}" for m, tau in enumerate(report.mode_times, start=1)]
    _emit(args, "\n".join(lines) + "\n", "series")
    if args.render:
        times = np.linspace(grid.t_start, grid.t_end, max(grid.n_samples, 2001))
        probs = _series(spec, start, start, times, "spectral")
        plotting.render_series(times, {"return probability": probs}, args.out.with_suffix(".png"))
    return 0


def _bessel_check(args) -> int:
    residuals = {
        "recurrence": specialfn.recurrence_residual(np.linspace(0.1, 50.0, 2000)),
        "normalization": specialfn.normalization_residual(np.linspace(0.0, 50.0, 2001)),
        "propagator_normalization": specialfn.propagator_normalization_residual(np.linspace(0.0, 20.0, 401)),
    }
    lines = ["check,max_residual,bound,status"]
    ok = True
    for name, value in residuals.items():
        passed = value < BESSEL_BOUNDS[name]
        ok &= passed
        lines.append(f"{name},{artifacts.fmt(value)},{BESSEL_BOUNDS[name]:g},{'pass' if passed else 'FAIL'}")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        artifacts.atomic_write(args.out, text)
    return 0 if ok else 1


COMMANDS = {
    "carpet": lambda a: _carpet(a, classical=False),
    "classical": lambda a: _carpet(a, classical=True),
    "return-prob": lambda a: _probability_series(a, crossing=False),
    "crossing": lambda a: _probability_series(a, crossing=True),
    "limdist": _limdist,
    "revival": _revival,
    "bessel-check": _bessel_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ctqw: {exc}", file=sys.stderr)
        return 2
    except CTQWError as exc:
        print(f"{exc.module}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ctqw: cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
