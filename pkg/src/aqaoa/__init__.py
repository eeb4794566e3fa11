"""Analog-QAOA at desk scale: optimize annealing schedules on exact state vectors.

The pieces compose left to right: ``problems`` builds Hamiltonian pairs and
states, ``schedule`` turns free knot values into a monotone C^1 interpolant,
``propagator`` evolves a state under the interpolated Hamiltonian,
``metrics`` scores the outcome, ``optimizer`` closes the variational loop,
and ``harness`` runs the sweep/scan experiments behind the ``aqaoa`` CLI.
"""

from ._version import __version__
from .errors import ConfigError, NumericalError
from .harness import (
    ExperimentConfig,
    SweepRecord,
    baseline_linear,
    find_min_time,
    run_sweep,
)
from .metrics import Score, energy, fidelity, relative_error, score
from .optimizer import (
    OptimizationResult,
    OptimizerConfig,
    RunRecord,
    optimize,
    optimize_annealing,
    score_parameters,
)
from .pauli import (
    GroundSpace,
    PauliSum,
    PauliTerm,
    ground_space,
    parse_pauli_term,
    pauli_sum,
    to_matrix,
)
from .problems import (
    ProblemInstance,
    heisenberg_chain,
    hydrogen_molecule,
    ising_chain,
    load_problem,
    mixer,
    resolve_problem,
    single_qubit,
)
from .propagator import (
    MIDPOINT,
    TROTTER,
    EvolutionSpec,
    default_steps,
    evolve,
    evolve_adaptive,
    trace_energy,
)
from .schedule import Schedule, build_schedule, linear_schedule

__all__ = [
    "__version__",
    "ConfigError",
    "NumericalError",
    "ExperimentConfig",
    "SweepRecord",
    "baseline_linear",
    "find_min_time",
    "run_sweep",
    "Score",
    "energy",
    "fidelity",
    "relative_error",
    "score",
    "OptimizationResult",
    "OptimizerConfig",
    "RunRecord",
    "optimize",
    "optimize_annealing",
    "score_parameters",
    "GroundSpace",
    "PauliSum",
    "PauliTerm",
    "ground_space",
    "parse_pauli_term",
    "pauli_sum",
    "to_matrix",
    "ProblemInstance",
    "heisenberg_chain",
    "hydrogen_molecule",
    "ising_chain",
    "load_problem",
    "mixer",
    "resolve_problem",
    "single_qubit",
    "MIDPOINT",
    "TROTTER",
    "EvolutionSpec",
    "default_steps",
    "evolve",
    "evolve_adaptive",
    "trace_energy",
    "Schedule",
    "build_schedule",
    "linear_schedule",
]
