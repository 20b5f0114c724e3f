"""Local Hamiltonians and their non-interacting sum ``H = sum_i I x ... x H_i x ... x I``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import BadDims, NotHermitian, NotQubit


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    matrix: np.ndarray

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        err = linalg.hermiticity_error(m)
        if err > linalg.HERMITIAN_TOL:
            raise NotHermitian(f"local Hamiltonian has max|H - H^dagger| = {err:.3g}")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_energies(cls, energies) -> "LocalHamiltonian":
        return cls(np.diag(np.asarray(energies, dtype=float)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> linalg.SpectralDecomposition:
        return linalg.eig_hermitian(self.matrix)

    @property
    def energies(self) -> np.ndarray:
        return self.spectrum.eigenvalues


@dataclass(frozen=True, eq=False)
class CompositeHamiltonian:
    locals: tuple

    @property
    def dims(self) -> tuple:
        return tuple(h.dim for h in self.locals)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def embedded(self, party: int) -> np.ndarray:
        """``I x ... x H_party x ... x I``."""
        return linalg.kron_all(
            h.matrix if k == party else np.eye(h.dim, dtype=complex) for k, h in enumerate(self.locals)
        )

    @cached_property
    def total(self) -> np.ndarray:
        out = sum(self.embedded(i) for i in range(len(self.locals)))
        out.setflags(write=False)
        return out

    @cached_property
    def spectrum(self) -> linalg.SpectralDecomposition:
        # Eigenpairs come from the local ones, so product eigenvectors stay exact product states.
        vals = np.zeros(1)
        vecs = np.ones((1, 1), dtype=complex)
        for h in self.locals:
            s = h.spectrum
            vals = np.add.outer(vals, s.eigenvalues).ravel()
            vecs = np.kron(vecs, s.eigenvectors)
        order = np.argsort(vals, kind="stable")
        return linalg.SpectralDecomposition(vals[order], vecs[:, order])

    def check_dims(self, dims) -> None:
        if tuple(dims) != self.dims:
            raise BadDims(f"state dims {tuple(dims)} do not match Hamiltonian dims {self.dims}")


def compose(locals_) -> CompositeHamiltonian:
    """Non-interacting composite Hamiltonian; entries may be LocalHamiltonian, matrices, or energy lists."""
    hs = []
    for h in locals_:
        if isinstance(h, LocalHamiltonian):
            hs.append(h)
            continue
        a = np.asarray(h)
        hs.append(LocalHamiltonian.from_energies(a) if a.ndim == 1 else LocalHamiltonian(a))
    if not hs:
        raise BadDims("at least one local Hamiltonian is required")
    return CompositeHamiltonian(tuple(hs))


def sorted_energy_levels(h: CompositeHamiltonian):
    s = h.spectrum
    return s.eigenvalues, s.eigenvectors


def unit_gap_qubits(n: int = 2) -> CompositeHamiltonian:
    return compose([[0.0, 1.0]] * n)


@dataclass(frozen=True)
class QubitHamiltonianParams:
    """``H = (e_plus I + e_minus h_hat . sigma) / 2``; the excited level lies along ``+h_hat``."""

    e_plus: float
    e_minus: float
    h_hat: np.ndarray

    @property
    def ground(self) -> float:
        return 0.5 * (self.e_plus - self.e_minus)

    @property
    def excited(self) -> float:
        return 0.5 * (self.e_plus + self.e_minus)

    def matrix(self) -> np.ndarray:
        return 0.5 * (self.e_plus * np.eye(2) + self.e_minus * sum(c * s for c, s in zip(self.h_hat, linalg.PAULIS)))

    @classmethod
    def from_levels(cls, ground: float, excited: float, h_hat=(0.0, 0.0, -1.0)) -> "QubitHamiltonianParams":
        """Levels ``e0 <= e1``; the default direction puts the excited state at ``|1>``."""
        return cls(excited + ground, excited - ground, np.asarray(h_hat, dtype=float))


def qubit_params(h) -> QubitHamiltonianParams:
    m = h.matrix if isinstance(h, LocalHamiltonian) else linalg.as_matrix(h)
    if m.shape != (2, 2):
        raise NotQubit(f"qubit_params needs a 2x2 Hamiltonian, got {m.shape}")
    w = linalg.eigvalsh(m)
    e_plus = float(np.trace(m).real)
    e_minus = float(w[1] - w[0])
    if e_minus <= 1e-14 * max(1.0, abs(e_plus)):
        return QubitHamiltonianParams(e_plus, 0.0, np.array([0.0, 0.0, 1.0]))
    h_hat = np.array([linalg.expectation(m, s) for s in linalg.PAULIS]) / e_minus
    return QubitHamiltonianParams(e_plus, e_minus, h_hat / np.linalg.norm(h_hat))
