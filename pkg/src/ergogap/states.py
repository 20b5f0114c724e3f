"""Multi-party density matrices: validation, marginals, entropy, classical-correlation tests and samplers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import BadDims, BadIndex, BadProbability, InvalidState, NotQubit

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
SIMPLEX_TOL = 1e-12
CC_TOL = 1e-8
CC_RETRIES = 8

# Bell basis order used by bell_mixture: singlet first, then the three triplets.
_S = 1.0 / math.sqrt(2.0)
PSI_MINUS = np.array([0, _S, -_S, 0], dtype=complex)
PSI_PLUS = np.array([0, _S, _S, 0], dtype=complex)
PHI_PLUS = np.array([_S, 0, 0, _S], dtype=complex)
PHI_MINUS = np.array([_S, 0, 0, -_S], dtype=complex)
BELL_STATES = (PSI_MINUS, PSI_PLUS, PHI_PLUS, PHI_MINUS)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: tuple
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues, ascending."""
        return linalg.eigvalsh(self.matrix)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True)
class ProductBasisWitness:
    """Outcome of the classical-correlation test.

    ``is_cc`` is ``None`` when the test could not certify either answer.
    When ``is_cc`` is true, ``local_bases[i]`` holds party ``i``'s basis as
    columns and ``populations`` the diagonal of the state in the product basis.
    """

    is_cc: Optional[bool]
    local_bases: tuple = ()
    populations: Optional[np.ndarray] = None
    max_commutator: float = 0.0
    detail: str = ""

    @property
    def conclusive(self) -> bool:
        return self.is_cc is not None

    @property
    def label(self) -> str:
        if self.is_cc is None:
            return "inconclusive"
        return "classically_correlated" if self.is_cc else "quantum_correlated"

    def reconstruct(self) -> np.ndarray:
        u = linalg.kron_all(self.local_bases)
        return (u * self.populations) @ u.conj().T


def _check_dims(dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise BadDims(f"dims must be a nonempty sequence of positive integers, got {dims}")
    return dims


def validate(dims, matrix, tol: Optional[float] = None) -> DensityMatrix:
    """Build a DensityMatrix, raising InvalidState listing every violated invariant.

    ``tol`` overrides the trace and positivity tolerances (Hermiticity stays at 1e-10
    unless ``tol`` is larger).
    """
    dims = _check_dims(dims)
    m = linalg.as_matrix(matrix)
    total = math.prod(dims)
    if m.shape != (total, total):
        raise BadDims(f"matrix shape {m.shape} does not match dims {dims} (product {total})")
    trace_tol = TRACE_TOL if tol is None else tol
    psd_tol = PSD_TOL if tol is None else tol
    herm_tol = HERMITIAN_TOL if tol is None else max(tol, HERMITIAN_TOL)

    violations = []
    herm = linalg.hermiticity_error(m)
    if herm > herm_tol:
        violations.append(("NotHermitian", herm))
    hpart = 0.5 * (m + m.conj().T)
    tr = float(np.trace(hpart).real)
    if abs(tr - 1.0) > trace_tol:
        violations.append(("TraceNotOne", tr))
    lowest = float(linalg.eigvalsh(hpart)[0])
    if lowest < -psd_tol:
        violations.append(("NotPSD", lowest))
    if violations:
        raise InvalidState(violations)
    m = hpart if herm > 0 else m
    m.setflags(write=False)
    return DensityMatrix(dims, m)


def _from_trusted(dims, matrix) -> DensityMatrix:
    m = np.array(matrix, dtype=complex)
    m.setflags(write=False)
    return DensityMatrix(tuple(dims), m)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the parties in ``keep`` (0-based indices, returned in ascending order)."""
    keep = sorted(set(int(k) for k in keep))
    n = rho.n_parties
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise BadIndex(f"keep must be a nonempty subset of 0..{n - 1}, got {keep}")
    if len(keep) == n:
        return rho
    dims = rho.dims
    t = rho.matrix.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # einsum subscripts: ket index i -> letter i, bra index -> letter n+i (or same letter when traced)
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    ket = [letters[i] for i in range(n)]
    bra = [letters[i] if i in traced else letters[n + i] for i in range(n)]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    reduced = np.einsum("".join(ket + bra) + "->" + "".join(out), t)
    kd = tuple(dims[i] for i in keep)
    d = math.prod(kd)
    return _from_trusted(kd, reduced.reshape(d, d))


def marginals(rho: DensityMatrix) -> list:
    return [partial_trace(rho, [i]) for i in range(rho.n_parties)]


def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    if rho.dims != (2,):
        raise NotQubit(f"bloch_vector needs a single qubit, got dims {rho.dims}")
    return np.array([linalg.expectation(rho.matrix, s) for s in linalg.PAULIS])


def from_bloch(r) -> DensityMatrix:
    r = np.asarray(r, dtype=float)
    m = 0.5 * (np.eye(2) + sum(c * s for c, s in zip(r, linalg.PAULIS)))
    return validate((2,), m)


def entropy_of_spectrum(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in nats; eigenvalues at or below zero contribute nothing."""
    return max(entropy_of_spectrum(rho.spectrum), 0.0)


def mutual_information(rho: DensityMatrix) -> float:
    """Total correlation: sum of marginal entropies minus the joint entropy."""
    return sum(von_neumann_entropy(m) for m in marginals(rho)) - von_neumann_entropy(rho)


# --- classical correlation -------------------------------------------------


def _party_blocks(rho: DensityMatrix, party: int) -> np.ndarray:
    """All ``d_i x d_i`` blocks ``<s|rho|t>`` with ``s, t`` running over the other parties."""
    dims, n = rho.dims, rho.n_parties
    t = rho.matrix.reshape(dims + dims)
    others = [k for k in range(n) if k != party]
    t = np.transpose(t, [party] + others + [n + party] + [n + k for k in others])
    d = dims[party]
    r = rho.dim // d
    t = t.reshape(d, r, d, r)
    return np.transpose(t, (1, 3, 0, 2)).reshape(r * r, d, d)


def _operator_basis(blocks: np.ndarray, tol: float) -> np.ndarray:
    k, d, _ = blocks.shape
    flat = blocks.reshape(k, d * d)
    _, sv, vh = np.linalg.svd(flat, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return np.zeros((0, d, d), dtype=complex)
    keep = sv > tol * sv[0]
    return vh[keep].reshape(-1, d, d)


def _max_commutator(ops: np.ndarray) -> float:
    if len(ops) < 2:
        return 0.0
    ab = np.einsum("iab,jbc->ijac", ops, ops)
    comm = ab - np.transpose(ab, (1, 0, 2, 3))
    return float(np.max(np.abs(comm)))


def _joint_eigenbasis(ops: np.ndarray, rng: np.random.Generator, tol: float) -> Optional[np.ndarray]:
    d = ops.shape[1]
    herm = np.concatenate([0.5 * (ops + np.conj(np.transpose(ops, (0, 2, 1)))),
                           -0.5j * (ops - np.conj(np.transpose(ops, (0, 2, 1))))])
    for _ in range(CC_RETRIES):
        coeffs = rng.standard_normal(len(herm))
        mix = np.tensordot(coeffs, herm, axes=1) if len(herm) else np.zeros((d, d), dtype=complex)
        u = linalg.eig_hermitian(mix, tol=1e-8).eigenvectors
        rotated = np.conj(u.T)[None] @ ops @ u[None]
        off = rotated - np.einsum("kii->ki", rotated)[:, :, None] * np.eye(d)[None]
        if not len(ops) or float(np.max(np.abs(off))) <= tol:
            return u
    return None


def is_classically_correlated(rho: DensityMatrix, tol: float = CC_TOL, seed: int = 0) -> ProductBasisWitness:
    """Decide whether ``rho`` is diagonal in some orthonormal product basis.

    For each party the blocks ``<s|rho|t>`` over the remaining parties must form a
    commuting family; their joint eigenbasis is that party's local basis. The
    result is certified by reconstructing ``rho`` from the product basis. When the
    commutation test passes but no basis can be certified the witness is
    inconclusive rather than a guess.
    """
    rng = np.random.default_rng(seed)
    bases = []
    worst = 0.0
    for party in range(rho.n_parties):
        ops = _operator_basis(_party_blocks(rho, party), tol)
        comm = _max_commutator(ops)
        worst = max(worst, comm)
        if comm > tol:
            return ProductBasisWitness(False, max_commutator=comm,
                                       detail=f"party {party} blocks do not commute")
        u = _joint_eigenbasis(ops, rng, tol)
        if u is None:
            return ProductBasisWitness(None, max_commutator=worst,
                                       detail=f"no joint eigenbasis certified for party {party}")
        bases.append(u)
    big = linalg.kron_all(bases)
    diag_form = big.conj().T @ rho.matrix @ big
    pops = np.diag(diag_form).real.copy()
    residual = float(np.max(np.abs(diag_form - np.diag(pops))))
    if residual > tol:
        return ProductBasisWitness(None, max_commutator=worst,
                                   detail=f"product basis leaves off-diagonal {residual:.3g}")
    return ProductBasisWitness(True, tuple(bases), pops, worst)


# --- constructors ----------------------------------------------------------


def _check_probabilities(p, name="probabilities") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < -SIMPLEX_TOL) or abs(p.sum() - 1.0) > SIMPLEX_TOL:
        raise BadProbability(f"{name} must lie on the probability simplex, got {p.tolist()}")
    return p


def _check_unit(p: float, name="p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise BadProbability(f"{name} must lie in [0, 1], got {p}")
    return p


def werner(p: float) -> DensityMatrix:
    """``p |psi-><psi-| + (1 - p) I/4``."""
    p = _check_unit(p)
    m = p * np.outer(PSI_MINUS, PSI_MINUS.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return validate((2, 2), m)


def bell_mixture(probabilities: Sequence[float]) -> DensityMatrix:
    """Mixture of ``|psi->, |psi+>, |phi+>, |phi->`` with the given weights (in that order)."""
    p = _check_probabilities(probabilities)
    if p.size != 4:
        raise BadProbability(f"bell_mixture needs four weights, got {p.size}")
    m = sum(w * np.outer(b, b.conj()) for w, b in zip(p, BELL_STATES))
    return validate((2, 2), m)


def cc_diagonal(dims, populations, local_bases=None) -> DensityMatrix:
    """``sum_b p_b (x)_i |b_i><b_i|``; populations are indexed in row-major product order.

    ``local_bases`` optionally gives one unitary per party (columns are the basis);
    the computational basis is used otherwise.
    """
    dims = _check_dims(dims)
    p = _check_probabilities(populations, "populations")
    if p.size != math.prod(dims):
        raise BadDims(f"{p.size} populations do not match dims {dims}")
    m = np.diag(p).astype(complex)
    if local_bases is not None:
        u = linalg.kron_all([linalg.as_matrix(b) for b in local_bases])
        m = u @ m @ u.conj().T
    return validate(dims, m)


def product_state(locals_) -> DensityMatrix:
    """Tensor product of local states; each entry is a state vector or a density matrix."""
    mats = []
    for loc in locals_:
        a = np.asarray(loc, dtype=complex)
        if a.ndim == 1:
            a = a / np.linalg.norm(a)
            a = np.outer(a, a.conj())
        mats.append(a)
    return validate(tuple(a.shape[0] for a in mats), linalg.kron_all(mats))


def pure_state(dims, vector) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return validate(dims, np.outer(v, v.conj()))


def haar_random_vector(d: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_random_pure(dims, seed=None) -> DensityMatrix:
    """Haar-random pure state on the full space; ``seed`` is an int or a numpy Generator."""
    dims = _check_dims(dims)
    return pure_state(dims, haar_random_vector(math.prod(dims), seed))


def random_pure_product(dims, seed=None) -> DensityMatrix:
    rng = np.random.default_rng(seed)
    return product_state([haar_random_vector(d, rng) for d in _check_dims(dims)])


def induced_random_mixed(dims, ancilla_dim: Optional[int] = None, seed=None) -> DensityMatrix:
    """Ginibre-induced random state ``G G^dagger / Tr(G G^dagger)`` with ``G`` of shape ``D x ancilla_dim``.

    ``ancilla_dim`` defaults to ``D`` (Hilbert-Schmidt measure).
    """
    dims = _check_dims(dims)
    rng = np.random.default_rng(seed)
    d = math.prod(dims)
    k = d if ancilla_dim is None else int(ancilla_dim)
    if k < 1:
        raise BadDims(f"ancilla_dim must be positive, got {k}")
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return validate(dims, 0.5 * (m + m.conj().T))


def maximally_mixed(dims) -> DensityMatrix:
    dims = _check_dims(dims)
    d = math.prod(dims)
    return validate(dims, np.eye(d) / d)


def local_unitary_conjugate(rho: DensityMatrix, unitaries) -> DensityMatrix:
    u = linalg.kron_all(unitaries)
    return _from_trusted(rho.dims, u @ rho.matrix @ u.conj().T)
