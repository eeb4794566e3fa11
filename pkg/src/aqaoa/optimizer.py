"""Classical minimization of the final energy over the free schedule knots.

The objective E(p) evolves the mixer ground state under the schedule built
from the interior knot vector p and measures <H_f>.  Nelder-Mead does the
minimization: the landscape is low-dimensional (a handful of knots), the
objective is smooth but derivative-free, and each evaluation is cheap at
desk scale.  The search always starts from the linear schedule p_k = k/N,
so the optimized energy can never end up above the linear baseline;
restarts perturb that start with seeded uniform noise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import metrics
from .errors import ConfigError, NumericalError
from .problems import ProblemInstance
from .propagator import MIDPOINT, EvolutionSpec, _matrix_of, evolve_adaptive
from .schedule import build_schedule


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "nelder-mead"
    max_evaluations: int | None = None  # None -> 2000 per free parameter
    restarts: int = 4
    initial_simplex_scale: float = 0.2
    convergence_tolerance: float = 1e-10  # objective spread (fatol)
    parameter_tolerance: float = 1e-4  # simplex spread (xatol)
    parameter_bounds: tuple | None = None  # (lo, hi) for all, or one pair per parameter
    seed: int = 0
    # Soft wall-clock cap checked between evaluations.  Using it trades away
    # bit-reproducibility (stopping becomes machine-speed dependent).
    max_seconds: float | None = None

    def __post_init__(self):
        if self.method != "nelder-mead":
            raise ConfigError(f"unsupported optimizer method {self.method!r}")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be positive")
        if self.restarts < 0:
            raise ConfigError("restarts must be non-negative")
        if not self.initial_simplex_scale > 0:
            raise ConfigError("initial_simplex_scale must be positive")
        if not self.convergence_tolerance > 0:
            raise ConfigError("convergence_tolerance must be positive")
        if not self.parameter_tolerance > 0:
            raise ConfigError("parameter_tolerance must be positive")
        if self.parameter_bounds is not None:
            arr = np.asarray(self.parameter_bounds, dtype=float)
            if arr.ndim not in (1, 2) or arr.shape[-1] != 2 or not np.all(np.isfinite(arr)):
                raise ConfigError("parameter_bounds must be a (lo, hi) pair or a list of pairs")
            if not np.all(arr[..., 0] < arr[..., 1]):
                raise ConfigError("parameter_bounds must satisfy lo < hi")


@dataclass(frozen=True)
class OptimizationResult:
    best_parameters: np.ndarray
    best_energy: float
    evaluations_used: int
    history: tuple  # (evaluation index, energy) in evaluation order
    converged: bool


def _bounds_arrays(config: OptimizerConfig, m: int):
    b = config.parameter_bounds
    if b is None:
        return None
    arr = np.asarray(b, dtype=float)
    if arr.shape == (2,):
        arr = np.tile(arr, (m, 1))
    if arr.shape != (m, 2):
        raise ConfigError(
            f"parameter_bounds must be one (lo, hi) pair or {m} pairs, got shape {arr.shape}"
        )
    if np.any(arr[:, 0] >= arr[:, 1]):
        raise ConfigError("parameter_bounds must satisfy lo < hi")
    return arr[:, 0], arr[:, 1]


def linear_start(m: int) -> np.ndarray:
    """Interior knots of the linear schedule: k/(m+1) for k = 1..m."""
    return np.arange(1, m + 1) / (m + 1)


def optimize(objective, m: int, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Nelder-Mead over m parameters from the linear-schedule start point.

    The evaluation budget is shared across the initial run and all restarts;
    ``converged`` is False whenever any run stopped on budget rather than on
    the tolerances.
    """
    if m < 1:
        raise ConfigError(f"need at least one free parameter, got m={m}")
    config = config or OptimizerConfig()
    budget = config.max_evaluations if config.max_evaluations is not None else 2000 * m
    bounds = _bounds_arrays(config, m)
    rng = np.random.default_rng(config.seed)
    x_start = linear_start(m)
    t_start = time.perf_counter()

    history = []
    best = {"x": None, "e": np.inf}

    class _OutOfTime(Exception):
        pass

    def wrapped(x):
        # the time budget never cancels the very first evaluation, so there
        # is always a best-so-far point to return
        if (
            config.max_seconds is not None
            and history
            and time.perf_counter() - t_start > config.max_seconds
        ):
            raise _OutOfTime
        x = np.clip(x, bounds[0], bounds[1]) if bounds is not None else np.asarray(x)
        val = float(objective(x))
        if not np.isfinite(val):
            raise NumericalError(f"objective returned {val} at parameters {x.tolist()}")
        history.append((len(history) + 1, val))
        if val < best["e"]:
            best["e"] = val
            best["x"] = np.array(x, dtype=float)
        return val

    ran_out = False
    for run in range(config.restarts + 1):
        x0 = x_start.copy()
        if run > 0:
            x0 = x0 + rng.uniform(
                -config.initial_simplex_scale, config.initial_simplex_scale, size=m
            )
        if bounds is not None:
            x0 = np.clip(x0, bounds[0], bounds[1])
        remaining = budget - len(history)
        if remaining < m + 2:  # not enough budget left to evaluate a simplex
            ran_out = True
            break
        simplex = np.vstack([x0] + [x0 + config.initial_simplex_scale * row for row in np.eye(m)])
        try:
            res = minimize(
                wrapped,
                x0,
                method="Nelder-Mead",
                options=dict(
                    initial_simplex=simplex,
                    fatol=config.convergence_tolerance,
                    xatol=config.parameter_tolerance,
                    maxfev=remaining,
                    maxiter=remaining,  # never binds before maxfev; keeps success == "hit tolerances"
                    adaptive=m > 3,
                ),
            )
        except _OutOfTime:
            ran_out = True
            break
        if not res.success:
            ran_out = True
    if best["x"] is None:
        raise NumericalError("optimizer made no evaluations")
    return OptimizationResult(
        best_parameters=best["x"],
        best_energy=float(best["e"]),
        evaluations_used=len(history),
        history=tuple(history),
        converged=not ran_out,
    )


@dataclass(frozen=True)
class RunRecord:
    """Everything recorded about one optimization run on one problem."""

    problem: str
    total_time: float
    m: int
    mode: str
    energy_tolerance: float
    seed: int
    parameters: tuple
    energy: float
    relative_error: float
    fidelity: float
    evaluations: int
    converged: bool
    steps_used: int
    wall_time: float
    history: tuple = field(repr=False, default=())
    schedule_samples: tuple = field(repr=False, default=())

    def to_dict(self) -> dict:
        d = {
            "problem": self.problem,
            "total_time": self.total_time,
            "m": self.m,
            "mode": self.mode,
            "energy_tolerance": self.energy_tolerance,
            "seed": self.seed,
            "parameters": list(self.parameters),
            "energy": self.energy,
            "relative_error": self.relative_error,
            "fidelity": self.fidelity,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "steps_used": self.steps_used,
            "wall_time": self.wall_time,
            "history": [list(h) for h in self.history],
            "schedule_samples": [list(s) for s in self.schedule_samples],
        }
        return d


def score_parameters(
    problem: ProblemInstance,
    parameters,
    total_time: float,
    mode: str = MIDPOINT,
    energy_tolerance: float = 1e-6,
):
    """Evolve under the schedule built from ``parameters`` and score the result.

    Returns (Score, steps_used).  An empty parameter vector scores the linear
    baseline.  This is also the replay path: records store parameters, and
    re-scoring them must reproduce the recorded metrics.
    """
    sched = build_schedule(parameters)
    spec = EvolutionSpec(problem.h_i, problem.h_f, sched, total_time, 1, mode)
    state, steps = evolve_adaptive(spec, problem.initial_state, energy_tolerance)
    return metrics.score(state, _matrix_of(problem.h_f), problem.ground), steps


def optimize_annealing(
    problem: ProblemInstance,
    m: int,
    total_time: float,
    config: OptimizerConfig | None = None,
    mode: str = MIDPOINT,
    energy_tolerance: float = 1e-6,
) -> RunRecord:
    """Full annealing-schedule optimization of one problem at fixed T."""
    config = config or OptimizerConfig()
    h_f = _matrix_of(problem.h_f)
    t0 = time.perf_counter()

    def objective(p):
        sched = build_schedule(p)
        spec = EvolutionSpec(problem.h_i, problem.h_f, sched, total_time, 1, mode)
        state, _ = evolve_adaptive(spec, problem.initial_state, energy_tolerance)
        return metrics.energy(state, h_f)

    result = optimize(objective, m, config)
    final_score, steps = score_parameters(
        problem, result.best_parameters, total_time, mode, energy_tolerance
    )
    wall = time.perf_counter() - t0
    sched = build_schedule(result.best_parameters)
    xs = np.linspace(0.0, 1.0, 101)
    samples = tuple((float(x), float(v)) for x, v in zip(xs, sched.value(xs)))
    return RunRecord(
        problem=problem.name,
        total_time=float(total_time),
        m=int(m),
        mode=mode,
        energy_tolerance=float(energy_tolerance),
        seed=int(config.seed),
        parameters=tuple(float(v) for v in result.best_parameters),
        energy=final_score.energy,
        relative_error=final_score.relative_error,
        fidelity=final_score.fidelity,
        evaluations=result.evaluations_used,
        converged=result.converged,
        steps_used=steps,
        wall_time=wall,
        history=result.history,
        schedule_samples=samples,
    )
