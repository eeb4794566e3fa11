"""Benchmark problem instances: mixer + final Hamiltonian + initial/ground states.

Conventions used throughout:

* the mixer is (omega_i/2) * sum_j X_j with ground state |-..-> and energy
  -n*omega_i/2;
* chains use open boundaries with n-1 nearest-neighbour bonds and the
  frequency convention omega_i = omega_f = 2J (J = 1 by default);
* the hydrogen instance fixes omega_i = 1, which also sets the time unit for
  its sweeps.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .pauli import GroundSpace, PauliSum, ground_space, parse_pauli_term

# Two-qubit encoding of the hydrogen molecule at 0.2 angstrom bond length:
# identity, single-Z, ZZ, YY and XX weights.
H2_COEFFICIENTS = (
    ("II", 2.8489),
    ("ZI", 0.5678),
    ("IZ", -1.4508),
    ("ZZ", 0.6799),
    ("YY", 0.0791),
    ("XX", 0.0791),
)


@dataclass(frozen=True)
class ProblemInstance:
    name: str
    h_i: PauliSum
    h_f: PauliSum
    initial_state: np.ndarray
    ground: GroundSpace
    omega_i: float

    @property
    def n(self) -> int:
        return self.h_f.n


def _axis_string(n: int, ops: dict[int, str]) -> str:
    return "".join(ops.get(j, "I") for j in range(1, n + 1))


def mixer(n: int, omega_i: float) -> tuple[PauliSum, np.ndarray]:
    """Transverse-field mixer (omega_i/2) sum_j X_j and its ground state |->^n."""
    if n < 1:
        raise ConfigError(f"qubit count must be >= 1, got {n}")
    if not omega_i > 0:
        raise ConfigError(f"omega_i must be positive, got {omega_i}")
    terms = [
        parse_pauli_term(_axis_string(n, {j: "X"}), omega_i / 2.0) for j in range(1, n + 1)
    ]
    h = PauliSum(n, tuple(terms))
    minus = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    state = minus
    for _ in range(n - 1):
        state = np.kron(state, minus)
    return h, state


def _instance(name: str, h_f: PauliSum, omega_i: float) -> ProblemInstance:
    h_i, state = mixer(h_f.n, omega_i)
    return ProblemInstance(name, h_i, h_f, state, ground_space(h_f), omega_i)


def single_qubit(omega: float = 1.0) -> ProblemInstance:
    """One qubit with H_f = (omega/2) Z; same frequency on mixer and target."""
    if not omega > 0:
        raise ConfigError(f"omega must be positive, got {omega}")
    h_f = PauliSum(1, (parse_pauli_term("Z", omega / 2.0),))
    return _instance("single-qubit", h_f, omega)


def hydrogen_molecule() -> ProblemInstance:
    """Two-qubit hydrogen molecule Hamiltonian (fixed published coefficients)."""
    terms = tuple(parse_pauli_term(label, c) for label, c in H2_COEFFICIENTS)
    return _instance("h2", PauliSum(2, terms), 1.0)


def _field_terms(n: int, omega_f: float) -> list:
    return [
        parse_pauli_term(_axis_string(n, {j: "Z"}), omega_f / 2.0) for j in range(1, n + 1)
    ]


def _chain_checks(n_sites: int, coupling: float):
    if n_sites < 1:
        raise ConfigError(f"chain needs at least one site, got {n_sites}")
    if not (np.isfinite(coupling) and coupling > 0):
        # omega_i = 2J keeps the mixer gap tied to the coupling; J <= 0 would
        # leave no sensible mixer frequency under that convention.
        raise ConfigError(f"coupling must be positive, got {coupling}")


def ising_chain(n_sites: int, omega_f: float = 2.0, coupling: float = 1.0) -> ProblemInstance:
    """Ising chain: (omega_f/2) sum Z_k - J sum_bonds Z_k Z_{k+1} (open boundary)."""
    _chain_checks(n_sites, coupling)
    terms = _field_terms(n_sites, omega_f)
    for k in range(1, n_sites):
        terms.append(
            parse_pauli_term(_axis_string(n_sites, {k: "Z", k + 1: "Z"}), -coupling)
        )
    return _instance(f"ising:{n_sites}", PauliSum(n_sites, tuple(terms)), 2.0 * coupling)


def heisenberg_chain(
    n_sites: int, omega_f: float = 2.0, coupling: float = 1.0
) -> ProblemInstance:
    """Heisenberg chain: (omega_f/2) sum Z_k - J sum_bonds (XX + YY + ZZ)."""
    _chain_checks(n_sites, coupling)
    terms = _field_terms(n_sites, omega_f)
    for k in range(1, n_sites):
        for axis in "XYZ":
            terms.append(
                parse_pauli_term(
                    _axis_string(n_sites, {k: axis, k + 1: axis}), -coupling
                )
            )
    return _instance(
        f"heisenberg:{n_sites}", PauliSum(n_sites, tuple(terms)), 2.0 * coupling
    )


def load_problem(path: str) -> ProblemInstance:
    """Read a problem from a JSON file: {"n": ..., "terms": [{"label", "coeff"}, ...]}.

    Optional fields: "name" (defaults to the file stem) and "omega_i"
    (defaults to 1.0) for the mixer.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read problem file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"problem file {path} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError(f"problem file {path}: top level must be an object")
    try:
        n = int(raw["n"])
        raw_terms = raw["terms"]
    except KeyError as exc:
        raise ConfigError(f"problem file {path}: missing required field {exc}")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise ConfigError(f"problem file {path}: 'terms' must be a non-empty list")
    terms = []
    for i, entry in enumerate(raw_terms):
        if not isinstance(entry, dict) or "label" not in entry or "coeff" not in entry:
            raise ConfigError(
                f"problem file {path}: terms[{i}] must be an object with 'label' and 'coeff'"
            )
        term = parse_pauli_term(str(entry["label"]), entry["coeff"])
        if term.n != n:
            raise ConfigError(
                f"problem file {path}: terms[{i}] label {term.axes!r} has length "
                f"{term.n}, expected n={n}"
            )
        terms.append(term)
    omega_i = float(raw.get("omega_i", 1.0))
    if not omega_i > 0:
        raise ConfigError(f"problem file {path}: omega_i must be positive")
    name = str(raw.get("name") or os.path.splitext(os.path.basename(path))[0])
    return _instance(name, PauliSum(n, tuple(terms)), omega_i)


def resolve_problem(spec: str) -> ProblemInstance:
    """Map a CLI problem argument to an instance.

    Built-in names: "single-qubit", "h2", "ising:<n>", "heisenberg:<n>";
    anything else is treated as a path to a JSON problem file.
    """
    name = spec.strip()
    if name == "single-qubit":
        return single_qubit()
    if name == "h2":
        return hydrogen_molecule()
    for prefix, builder in (("ising:", ising_chain), ("heisenberg:", heisenberg_chain)):
        if name.startswith(prefix):
            try:
                n_sites = int(name[len(prefix) :])
            except ValueError:
                raise ConfigError(f"bad chain size in problem name {spec!r}")
            return builder(n_sites)
    if os.path.exists(name):
        return load_problem(name)
    raise ConfigError(
        f"unknown problem {spec!r}: not a built-in name and no such file"
    )
