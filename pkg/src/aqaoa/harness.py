"""Experiment runner: T/parameter sweeps, minimal-time search, linear baseline.

A sweep optimizes every (T, m) cell of a grid, scores the linear schedule at
each T for comparison, and persists the results twice: a flat CSV for
plotting and a JSON record carrying everything needed to replay any cell
(the stored knot values are sufficient to recompute its metrics exactly).

Determinism: per-cell optimizer seeds are derived from the master seed and
the cell's grid indices, so re-running a config reproduces the CSV byte for
byte.  The wall-time column is left empty unless timing is explicitly
requested, because timing is the one thing a rerun cannot reproduce.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from dataclasses import dataclass

from ._version import __version__
from .errors import ConfigError, NumericalError
from .metrics import Score
from .optimizer import OptimizerConfig, RunRecord, optimize_annealing, score_parameters
from .problems import ProblemInstance, resolve_problem
from .propagator import MIDPOINT

CSV_COLUMNS = (
    "problem",
    "T",
    "m",
    "energy",
    "eps_r",
    "fidelity",
    "baseline_eps_r",
    "baseline_fidelity",
    "evals",
    "seconds",
    "status",
)


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    parameter_counts: tuple
    T_values: tuple
    optimizer: OptimizerConfig = OptimizerConfig()
    mode: str = MIDPOINT
    energy_tolerance: float = 1e-6
    seed: int = 0
    record_timing: bool = False
    cell_seconds: float | None = None  # optional per-cell wall-clock budget

    def __post_init__(self):
        object.__setattr__(self, "parameter_counts", tuple(int(m) for m in self.parameter_counts))
        object.__setattr__(self, "T_values", tuple(float(t) for t in self.T_values))
        if not self.parameter_counts:
            raise ConfigError("parameter_counts must not be empty")
        if not self.T_values:
            raise ConfigError("T_values must not be empty")
        if any(m < 1 for m in self.parameter_counts):
            raise ConfigError("every parameter count must be >= 1")
        if any(not t > 0 for t in self.T_values):
            raise ConfigError("every T value must be positive")
        if not self.energy_tolerance > 0:
            raise ConfigError("energy_tolerance must be positive")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["parameter_counts"] = list(self.parameter_counts)
        d["T_values"] = list(self.T_values)
        return d

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("experiment config must be a JSON object")
        data = dict(raw)
        opt = data.pop("optimizer", {})
        if not isinstance(opt, dict):
            raise ConfigError("'optimizer' must be an object")
        try:
            opt_cfg = OptimizerConfig(**{
                k: (tuple(v) if k == "parameter_bounds" and v is not None else v)
                for k, v in opt.items()
            })
        except TypeError as exc:
            raise ConfigError(f"bad optimizer config: {exc}")
        try:
            return cls(optimizer=opt_cfg, **data)
        except TypeError as exc:
            raise ConfigError(f"bad experiment config: {exc}")

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}")
        return cls.from_dict(raw)


@dataclass(frozen=True)
class SweepCell:
    total_time: float
    m: int
    status: str  # "ok" or an error summary
    run: RunRecord | None
    baseline_relative_error: float | None
    baseline_fidelity: float | None


@dataclass(frozen=True)
class SweepRecord:
    config: dict
    cells: tuple
    version: str

    def to_dict(self) -> dict:
        cells = []
        for c in self.cells:
            entry = {
                "total_time": c.total_time,
                "m": c.m,
                "status": c.status,
                "baseline_relative_error": c.baseline_relative_error,
                "baseline_fidelity": c.baseline_fidelity,
            }
            entry["run"] = c.run.to_dict() if c.run is not None else None
            cells.append(entry)
        return {"version": self.version, "config": self.config, "cells": cells}


def _cell_seed(master: int, t_index: int, m_index: int) -> int:
    # Fixed arithmetic so that cell results never depend on execution order.
    return int(master) + 104729 * t_index + 101 * m_index


def baseline_linear(
    problem: ProblemInstance,
    total_time: float,
    mode: str = MIDPOINT,
    energy_tolerance: float = 1e-6,
) -> Score:
    """Score of the plain linear schedule (no free parameters) at this T."""
    result, _ = score_parameters(problem, (), total_time, mode, energy_tolerance)
    return result


def run_sweep(config: ExperimentConfig) -> SweepRecord:
    """Optimize every (T, m) cell in the grid; failures stay in their row."""
    problem = resolve_problem(config.problem)
    cells = []
    for ti, t in enumerate(config.T_values):
        try:
            base = baseline_linear(problem, t, config.mode, config.energy_tolerance)
            base_eps, base_fid = base.relative_error, base.fidelity
        except (ConfigError, NumericalError) as exc:
            base_eps = base_fid = None
            base_err = f"baseline failed: {exc}"
        else:
            base_err = None
        for mi, m in enumerate(config.parameter_counts):
            opt_cfg = dataclasses.replace(
                config.optimizer,
                seed=_cell_seed(config.seed, ti, mi),
            )
            if config.cell_seconds is not None:
                opt_cfg = dataclasses.replace(opt_cfg, max_seconds=config.cell_seconds)
            try:
                run = optimize_annealing(
                    problem, m, t, opt_cfg, config.mode, config.energy_tolerance
                )
                status = "ok" if base_err is None else base_err
            except (ConfigError, NumericalError) as exc:
                run = None
                status = f"error: {exc}"
            cells.append(
                SweepCell(
                    total_time=t,
                    m=m,
                    status=status,
                    run=run,
                    baseline_relative_error=base_eps,
                    baseline_fidelity=base_fid,
                )
            )
    return SweepRecord(config=config.to_dict(), cells=tuple(cells), version=__version__)


def _fmt(value) -> str:
    return "" if value is None else repr(value)


def sweep_csv_text(record: SweepRecord) -> str:
    """Render the CSV; identical configs produce identical text."""
    problem = record.config.get("problem", "")
    record_timing = bool(record.config.get("record_timing", False))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for c in record.cells:
        run = c.run
        if run is None:
            row = [problem, _fmt(c.total_time), str(c.m), "", "", "",
                   _fmt(c.baseline_relative_error), _fmt(c.baseline_fidelity),
                   "", "", c.status]
        else:
            seconds = f"{run.wall_time:.3f}" if record_timing else ""
            row = [
                problem,
                _fmt(c.total_time),
                str(c.m),
                _fmt(run.energy),
                _fmt(run.relative_error),
                _fmt(run.fidelity),
                _fmt(c.baseline_relative_error),
                _fmt(c.baseline_fidelity),
                str(run.evaluations),
                seconds,
                c.status,
            ]
        writer.writerow(row)
    return buf.getvalue()


def write_sweep(record: SweepRecord, csv_path: str, json_path: str | None = None):
    with open(csv_path, "w", newline="") as fh:
        fh.write(sweep_csv_text(record))
    if json_path is not None:
        with open(json_path, "w") as fh:
            json.dump(record.to_dict(), fh, indent=2)
            fh.write("\n")


def find_min_time(
    problem: ProblemInstance,
    m: int,
    fidelity_target: float,
    T_grid,
    config: OptimizerConfig | None = None,
    mode: str = MIDPOINT,
    energy_tolerance: float = 1e-6,
):
    """Smallest grid T whose optimized fidelity reaches the target.

    Scans the ascending grid and stops at the first success.  Returns
    (T_star, record); when no grid point qualifies the first element is None
    and the record is the best-fidelity attempt, so callers can see how close
    the search got.
    """
    if not (0.0 < fidelity_target < 1.0):
        raise ConfigError(f"fidelity target must be in (0, 1), got {fidelity_target}")
    grid = [float(t) for t in T_grid]
    if not grid:
        raise ConfigError("T grid must not be empty")
    if any(not t > 0 for t in grid):
        raise ConfigError("grid times must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("T grid must be strictly ascending")
    config = config or OptimizerConfig()
    best = None
    for idx, t in enumerate(grid):
        cfg = dataclasses.replace(config, seed=_cell_seed(config.seed, idx, 0))
        record = optimize_annealing(problem, m, t, cfg, mode, energy_tolerance)
        if best is None or record.fidelity > best.fidelity:
            best = record
        if record.fidelity >= fidelity_target:
            return t, record
    return None, best
