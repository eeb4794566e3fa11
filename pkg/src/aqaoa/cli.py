"""Command-line entry points.

Subcommands::

    aqaoa solve     one optimization run at fixed problem, m, T
    aqaoa sweep     grid of (T, m) cells from a JSON config, CSV + JSON out
    aqaoa min-time  smallest T on a grid reaching a fidelity target
    aqaoa baseline  score of the plain linear schedule

Exit codes: 0 success, 1 bad configuration or arguments, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from ._version import __version__
from .errors import ConfigError, NumericalError
from .harness import (
    ExperimentConfig,
    baseline_linear,
    find_min_time,
    run_sweep,
    write_sweep,
)
from .optimizer import OptimizerConfig, optimize_annealing
from .problems import resolve_problem
from .propagator import MIDPOINT, EvolutionSpec, trace_energy
from .schedule import build_schedule


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise ConfigError(message)


def _parse_grid(text: str):
    """Accept 'start:stop:step' (inclusive) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must look like start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"grid {text!r} has non-numeric fields")
        if step <= 0 or stop < start:
            raise ConfigError(f"grid {text!r} must ascend with positive step")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"grid {text!r} has non-numeric entries")


def _optimizer_from_args(args) -> OptimizerConfig:
    return OptimizerConfig(
        max_evaluations=args.max_evals,
        restarts=args.restarts,
        convergence_tolerance=args.fatol,
        seed=args.seed,
    )


def _add_common(parser):
    parser.add_argument("--problem", required=True,
                        help="single-qubit | h2 | ising:<n> | heisenberg:<n> | problem.json")
    parser.add_argument("--mode", default=MIDPOINT, choices=["midpoint", "trotter"],
                        help="propagation mode (default midpoint)")
    parser.add_argument("--energy-tolerance", type=float, default=1e-6,
                        help="adaptive integrator energy tolerance")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-evals", type=int, default=None,
                        help="total objective-evaluation budget (default 2000 per parameter)")
    parser.add_argument("--restarts", type=int, default=4,
                        help="number of perturbed restarts after the linear start")
    parser.add_argument("--fatol", type=float, default=1e-10,
                        help="objective-spread convergence tolerance")


def _write_samples_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_solve(args) -> int:
    problem = resolve_problem(args.problem)
    record = optimize_annealing(
        problem, args.params, args.time, _optimizer_from_args(args),
        args.mode, args.energy_tolerance,
    )
    print(f"problem            {record.problem}")
    print(f"T                  {record.total_time:g}")
    print(f"parameters (m={record.m})   {np.array(record.parameters)}")
    print(f"energy             {record.energy:.10f}")
    print(f"ground energy      {problem.ground.energy:.10f}")
    print(f"relative error     {record.relative_error:.3e}")
    print(f"fidelity           {record.fidelity:.6f}")
    print(f"evaluations        {record.evaluations}")
    print(f"integrator steps   {record.steps_used}")
    print(f"converged          {record.converged}")
    if args.dump_schedule:
        _write_samples_csv(args.dump_schedule, ("x", "lambda"),
                           [(repr(float(x)), repr(float(v))) for x, v in record.schedule_samples])
        print(f"schedule samples -> {args.dump_schedule}")
    if args.trace:
        sched = build_schedule(record.parameters)
        steps = min(record.steps_used, 4096)
        spec = EvolutionSpec(problem.h_i, problem.h_f, sched, record.total_time,
                             steps, args.mode)
        times, energies = trace_energy(spec, problem.initial_state)
        _write_samples_csv(args.trace, ("t", "energy"),
                           [(repr(float(t)), repr(float(e))) for t, e in zip(times, energies)])
        print(f"energy trace -> {args.trace}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(record.to_dict(), fh, indent=2)
            fh.write("\n")
        print(f"run record -> {args.json}")
    return 0


def _cmd_sweep(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    record = run_sweep(config)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "sweep.csv")
    json_path = os.path.join(args.out, "sweep.json")
    write_sweep(record, csv_path, json_path)
    n_err = sum(1 for c in record.cells if c.status != "ok")
    print(f"{len(record.cells)} cells -> {csv_path} ({n_err} with errors)")
    return 0


def _cmd_min_time(args) -> int:
    problem = resolve_problem(args.problem)
    grid = _parse_grid(args.grid)
    t_star, record = find_min_time(
        problem, args.params, args.target, grid,
        _optimizer_from_args(args), args.mode, args.energy_tolerance,
    )
    if t_star is None:
        best = 0.0 if record is None else record.fidelity
        print(f"target {args.target} not reached on grid (best fidelity {best:.6f})")
        return 0
    print(f"T* = {t_star:g} (fidelity {record.fidelity:.6f}, m={args.params})")
    return 0


def _cmd_baseline(args) -> int:
    problem = resolve_problem(args.problem)
    result = baseline_linear(problem, args.time, args.mode, args.energy_tolerance)
    print(f"problem         {problem.name}")
    print(f"T               {args.time:g}")
    print(f"energy          {result.energy:.10f}")
    print(f"relative error  {result.relative_error:.3e}")
    print(f"fidelity        {result.fidelity:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aqaoa",
                     description="Annealing-schedule optimization on state-vector simulations")
    parser.add_argument("--version", action="version", version=f"aqaoa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="optimize one (problem, m, T) cell")
    _add_common(p_solve)
    p_solve.add_argument("--params", type=int, required=True, help="free interior knots")
    p_solve.add_argument("--time", type=float, required=True, help="total evolution time T")
    p_solve.add_argument("--dump-schedule", metavar="CSV",
                         help="write (x, lambda) samples of the optimized schedule")
    p_solve.add_argument("--trace", metavar="CSV",
                         help="write (t, <H_f>) samples along the optimized evolution")
    p_solve.add_argument("--json", metavar="FILE", help="write the full run record as JSON")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run a (T, m) grid from a JSON config")
    p_sweep.add_argument("--config", required=True, help="experiment config JSON")
    p_sweep.add_argument("--out", required=True, help="output directory for sweep.csv/.json")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_min = sub.add_parser("min-time", help="smallest grid T reaching a fidelity target")
    _add_common(p_min)
    p_min.add_argument("--params", type=int, required=True)
    p_min.add_argument("--target", type=float, default=0.99)
    p_min.add_argument("--grid", default="0.5:12:0.5",
                       help="'start:stop:step' (inclusive) or comma list")
    p_min.set_defaults(func=_cmd_min_time)

    p_base = sub.add_parser("baseline", help="score the linear schedule at one T")
    p_base.add_argument("--problem", required=True)
    p_base.add_argument("--time", type=float, required=True)
    p_base.add_argument("--mode", default=MIDPOINT, choices=["midpoint", "trotter"])
    p_base.add_argument("--energy-tolerance", type=float, default=1e-6)
    p_base.set_defaults(func=_cmd_baseline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
