"""Scoring of evolved states: energy, relative error, ground-space fidelity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .pauli import GroundSpace, PauliSum, to_matrix


@dataclass(frozen=True)
class Score:
    energy: float
    relative_error: float
    fidelity: float


def _as_matrix(h) -> np.ndarray:
    return to_matrix(h) if isinstance(h, PauliSum) else np.asarray(h)


def energy(state: np.ndarray, h_f) -> float:
    """Expectation value <state|H_f|state>; must be real for a Hermitian H_f."""
    mat = _as_matrix(h_f)
    state = np.asarray(state, dtype=complex).ravel()
    if mat.shape[0] != state.size:
        raise ConfigError(
            f"state dimension {state.size} does not match Hamiltonian {mat.shape[0]}"
        )
    val = complex(np.vdot(state, mat @ state))
    if abs(val.imag) > 1e-10:
        raise NumericalError(
            f"energy has imaginary part {val.imag:.2e}; Hamiltonian is not Hermitian"
        )
    return float(val.real)


def relative_error(achieved: float, ground: GroundSpace) -> float:
    """|achieved - E_0| / |E_0|, the distance to the ground energy in relative terms."""
    e0 = ground.energy
    if abs(e0) <= 1e-12:
        raise ConfigError(
            "ground energy is (numerically) zero, so the relative error is undefined; "
            "shift the final Hamiltonian by a constant identity term"
        )
    return abs(achieved - e0) / abs(e0)


def fidelity(state: np.ndarray, ground: GroundSpace) -> float:
    """Squared projection of the state onto the ground eigenspace.

    For a non-degenerate ground space this is the usual squared overlap with
    the ground state; with degeneracy it sums over an orthonormal basis of
    the eigenspace, which makes it independent of the basis choice and of
    global phases.
    """
    state = np.asarray(state, dtype=complex).ravel()
    if ground.basis.shape[0] != state.size:
        raise ConfigError(
            f"state dimension {state.size} does not match ground space {ground.basis.shape[0]}"
        )
    overlaps = ground.basis.conj().T @ state
    return float(np.sum(np.abs(overlaps) ** 2))


def score(state: np.ndarray, h_f, ground: GroundSpace) -> Score:
    """Bundle energy, relative error, and fidelity for one final state."""
    e = energy(state, h_f)
    return Score(e, relative_error(e, ground), fidelity(state, ground))
