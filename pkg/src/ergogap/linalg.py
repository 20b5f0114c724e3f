"""Dense complex matrix helpers and a cyclic Jacobi eigensolver for Hermitian matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 100

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues; column ``k`` of ``eigenvectors`` belongs to ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermiticity_error(m: np.ndarray) -> float:
    """Max-norm of ``M - M^dagger``."""
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {m.shape}")
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """``Tr(A B)`` without forming the product."""
    if a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionMismatch(f"trace_product needs equal square shapes, got {a.shape} and {b.shape}")
    return complex(np.sum(a * b.T))


def expectation(rho: np.ndarray, h: np.ndarray) -> float:
    """Real part of ``Tr(rho H)``; both arguments are taken to be Hermitian."""
    return trace_product(rho, h).real


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    theta = 0.5 * math.atan2(2.0 * r, (a[p, p] - a[q, q]).real)
    c, s = math.cos(theta), math.sin(theta)
    # columns of g are the eigenvectors of the 2x2 pivot block
    g = np.array([[c, -s], [s * phase.conjugate(), c * phase.conjugate()]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ g


def eig_hermitian(m, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix by cyclic Jacobi sweeps (row-major pivot order).

    Raises NotHermitian if ``max|M - M^dagger| > tol`` and NoConvergence
    if the off-diagonal mass does not vanish within ``MAX_SWEEPS`` sweeps.
    """
    a = as_matrix(m)
    err = hermiticity_error(a)
    if err > tol:
        raise NotHermitian(f"max|M - M^dagger| = {err:.3g} exceeds {tol:.3g}")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if n > 1 and scale > 0.0:
        target = (1e-15 * scale) ** 2
        for _ in range(MAX_SWEEPS):
            off = float(np.sum(np.abs(np.triu(a, 1)) ** 2))
            if off <= target:
                break
            # skip pivots already negligible against the current diagonal scale
            floor = 1e-18 * scale
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if abs(a[p, q]) > floor:
                        _rotate(a, v, p, q)
        else:
            raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], v[:, order])


def eigvalsh(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return eig_hermitian(m, tol).eigenvalues


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix with the R-diagonal phases removed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))
