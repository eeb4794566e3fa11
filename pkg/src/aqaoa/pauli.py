"""Pauli-string Hamiltonians: construction, dense materialization, ground spaces.

A Hamiltonian is a real-weighted sum of tensor products of single-qubit Pauli
operators.  Qubit 1 is the *leftmost* Kronecker factor, so the label "XI"
means X on qubit 1 and identity on qubit 2.  Real coefficients make the dense
matrix Hermitian by construction (exactly, not just to rounding).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import ConfigError, NumericalError

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

# Dense matrices only: beyond this qubit count the 2^n x 2^n representation
# stops being desk-scale.
MAX_QUBITS = 12


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string, e.g. 0.5 * Z otimes Z otimes I."""

    coefficient: float
    axes: str  # one character per qubit, drawn from I, X, Y, Z

    @property
    def n(self) -> int:
        return len(self.axes)


def parse_pauli_term(label: str, coefficient: float) -> PauliTerm:
    """Validate a Pauli-string label ("ZZI", "XX", ...) and build a term.

    Character j of the label acts on qubit j (1-based, leftmost factor first).
    """
    if not label:
        raise ConfigError("Pauli label must be non-empty")
    bad = set(label) - set("IXYZ")
    if bad:
        raise ConfigError(f"Pauli label {label!r} contains invalid characters {sorted(bad)}")
    coefficient = float(coefficient)
    if not np.isfinite(coefficient):
        raise ConfigError(f"coefficient for {label!r} must be finite, got {coefficient}")
    return PauliTerm(coefficient, label)


@dataclass(frozen=True)
class PauliSum:
    """A Hamiltonian as a list of Pauli terms over n qubits."""

    n: int
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"qubit count must be >= 1, got {self.n}")
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.n != self.n:
                raise ConfigError(
                    f"term {t.axes!r} acts on {t.n} qubits, expected {self.n}"
                )

    @property
    def dim(self) -> int:
        return 2**self.n


def pauli_sum(labeled_terms, n: int | None = None) -> PauliSum:
    """Build a PauliSum from (label, coefficient) pairs."""
    terms = [parse_pauli_term(label, c) for label, c in labeled_terms]
    if not terms and n is None:
        raise ConfigError("cannot infer qubit count from an empty term list")
    if n is None:
        n = terms[0].n
    return PauliSum(n, tuple(terms))


def _string_matrix(axes: str) -> np.ndarray:
    return reduce(np.kron, (PAULI_MATRICES[c] for c in axes))


def to_matrix(h: PauliSum) -> np.ndarray:
    """Materialize the dense 2^n x 2^n Hermitian matrix of a PauliSum."""
    if h.n > MAX_QUBITS:
        raise ConfigError(
            f"{h.n} qubits exceeds the dense-matrix cap of {MAX_QUBITS}"
        )
    out = np.zeros((h.dim, h.dim), dtype=complex)
    for t in h.terms:
        out += t.coefficient * _string_matrix(t.axes)
    return out


@dataclass(frozen=True)
class GroundSpace:
    """Lowest eigenvalue of a Hamiltonian plus an orthonormal basis of its eigenspace.

    ``basis`` has shape (2^n, g) with g the degeneracy; columns are orthonormal.
    Keeping the whole eigenspace (instead of one arbitrary eigenvector) is what
    makes the fidelity well defined for degenerate ground states.
    """

    energy: float
    basis: np.ndarray
    degeneracy_tolerance: float

    @property
    def degeneracy(self) -> int:
        return self.basis.shape[1]


def ground_space(h: PauliSum, degeneracy_tolerance: float = 1e-9) -> GroundSpace:
    """Dense eigensolve for the lowest eigenvalue and its full eigenspace.

    Eigenvalues within ``degeneracy_tolerance * max|eigenvalue|`` of the
    minimum are treated as degenerate and their eigenvectors all enter the
    basis.
    """
    mat = to_matrix(h)
    try:
        vals, vecs = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise NumericalError(f"eigensolver failed on {h.n}-qubit Hamiltonian: {exc}")
    e0 = float(vals[0])
    spectral_scale = float(np.max(np.abs(vals)))
    sel = vals <= e0 + degeneracy_tolerance * spectral_scale
    return GroundSpace(e0, vecs[:, sel].copy(), degeneracy_tolerance)
