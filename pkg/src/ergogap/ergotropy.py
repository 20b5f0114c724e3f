"""Passive states, global/local ergotropy and the ergotropic gap.

Local ergotropy uses the exact per-party formula, which is valid because
``CompositeHamiltonian`` carries no interaction terms.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import linalg
from .errors import BadBloch, BadProbability
from .hamiltonians import CompositeHamiltonian, LocalHamiltonian, QubitHamiltonianParams, compose
from .states import DensityMatrix, marginals

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class WorkReport:
    global_ergotropy: float
    local_ergotropy: float
    ergotropic_gap: float
    initial_energy: float
    passive_energy: float
    local_passive_energies: tuple
    local_ergotropies: tuple
    gap_from_passive_energies: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["local_passive_energies"] = list(self.local_passive_energies)
        d["local_ergotropies"] = list(self.local_ergotropies)
        return d


def as_composite(h) -> CompositeHamiltonian:
    if isinstance(h, CompositeHamiltonian):
        return h
    if isinstance(h, LocalHamiltonian):
        return CompositeHamiltonian((h,))
    return compose(h)


def passive_populations(rho: DensityMatrix) -> np.ndarray:
    """State eigenvalues in descending order (stable with respect to ties)."""
    return rho.spectrum[::-1].copy()


def passive_energy(rho: DensityMatrix, h) -> float:
    """``sum_a lambda_a xi_a`` with populations descending and energies ascending."""
    h = as_composite(h)
    h.check_dims(rho.dims)
    return float(np.dot(passive_populations(rho), h.spectrum.eigenvalues))


def passive_state(rho: DensityMatrix, h) -> DensityMatrix:
    h = as_composite(h)
    h.check_dims(rho.dims)
    v = h.spectrum.eigenvectors
    m = (v * passive_populations(rho)) @ v.conj().T
    m.setflags(write=False)
    return DensityMatrix(rho.dims, m)


def mean_energy(rho: DensityMatrix, h) -> float:
    h = as_composite(h)
    h.check_dims(rho.dims)
    return linalg.expectation(rho.matrix, h.total)


def global_ergotropy(rho: DensityMatrix, h) -> float:
    return mean_energy(rho, h) - passive_energy(rho, h)


def _local_terms(rho: DensityMatrix, h: CompositeHamiltonian):
    h.check_dims(rho.dims)
    energies, passives = [], []
    for marg, hi in zip(marginals(rho), h.locals):
        energies.append(linalg.expectation(marg.matrix, hi.matrix))
        passives.append(float(np.dot(passive_populations(marg), hi.energies)))
    return energies, passives


def local_passive_energies(rho: DensityMatrix, h) -> list:
    return _local_terms(rho, as_composite(h))[1]


def local_ergotropy(rho: DensityMatrix, h) -> float:
    energies, passives = _local_terms(rho, as_composite(h))
    return float(sum(e - p for e, p in zip(energies, passives)))


def ergotropic_gap(rho: DensityMatrix, h) -> WorkReport:
    h = as_composite(h)
    initial = mean_energy(rho, h)
    passive = passive_energy(rho, h)
    energies, passives = _local_terms(rho, h)
    w_global = initial - passive
    local_w = tuple(e - p for e, p in zip(energies, passives))
    w_local = float(sum(local_w))
    return WorkReport(
        global_ergotropy=w_global,
        local_ergotropy=w_local,
        ergotropic_gap=w_global - w_local,
        initial_energy=initial,
        passive_energy=passive,
        local_passive_energies=tuple(passives),
        local_ergotropies=local_w,
        gap_from_passive_energies=float(sum(passives)) - passive,
    )


def is_passive(rho: DensityMatrix, h, tol: float = ZERO_TOL) -> bool:
    return global_ergotropy(rho, h) <= tol


# --- two-qubit closed forms ------------------------------------------------


def _sorted_probabilities(p, n=4) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.size != n or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-12:
        raise BadProbability(f"expected {n} probabilities on the simplex, got {p.tolist()}")
    if np.any(np.diff(p) > 1e-15):
        raise BadProbability(f"probabilities must be sorted in descending order, got {p.tolist()}")
    return p


def _levels(params: QubitHamiltonianParams):
    return params.ground, params.excited


def two_qubit_gap_closed_form(populations, params1: QubitHamiltonianParams, params2: QubitHamiltonianParams,
                              r1: float, r2: float) -> float:
    """Gap from the state spectrum and the Bloch-vector lengths of the two marginals.

    ``populations`` are the state eigenvalues sorted descending; they are paired
    with the composite levels ``e_x^1 + e_y^2`` sorted ascending.
    """
    lam = _sorted_probabilities(populations)
    for r in (r1, r2):
        if not (-1e-12 <= r <= 1.0 + 1e-9):
            raise BadBloch(f"Bloch vector length must lie in [0, 1], got {r}")
    g1, x1 = _levels(params1)
    g2, x2 = _levels(params2)
    composite = np.sort([g1 + g2, g1 + x2, x1 + g2, x1 + x2])
    local = 0.5 * (params1.e_plus - params1.e_minus * r1) + 0.5 * (params2.e_plus - params2.e_minus * r2)
    return float(local - np.dot(lam, composite))


def bell_mixture_gap(probabilities, params1: QubitHamiltonianParams, params2: QubitHamiltonianParams) -> float:
    """Gap of a Bell-diagonal state from its sorted weights ``p_max >= p' >= p'' >= p_min``.

    The four-term expression assumes party 1 has the larger splitting, so that
    ``e^0_1 + e^1_2 <= e^1_1 + e^0_2``; otherwise the parties are swapped first.
    """
    p_max, p1, p2, p_min = _sorted_probabilities(probabilities)
    if params2.e_minus > params1.e_minus:
        params1, params2 = params2, params1
    e01, e11 = _levels(params1)
    e02, e12 = _levels(params2)
    return float(
        e01 * (0.5 - p_max - p1)
        + e02 * (0.5 - p_max - p2)
        + e11 * (0.5 - p2 - p_min)
        + e12 * (0.5 - p1 - p_min)
    )


def werner_gap(p: float, params1: QubitHamiltonianParams, params2: QubitHamiltonianParams) -> float:
    """Half of ``p`` times the sum of the two local splittings."""
    return 0.5 * p * (params1.e_minus + params2.e_minus)


def mixed_product_gap(alpha: float, beta: float, params1: QubitHamiltonianParams,
                      params2: QubitHamiltonianParams) -> float:
    """Gap of ``diag(alpha, 1-alpha) x diag(beta, 1-beta)`` in the energy eigenbases.

    Requires ``beta < alpha < 1/2`` and a larger splitting on party 1; the result is
    ``(alpha - beta)`` times the difference of the splittings.
    """
    if not (0.0 <= beta < alpha < 0.5):
        raise BadProbability(f"need 0 <= beta < alpha < 1/2, got alpha={alpha}, beta={beta}")
    if params1.e_minus < params2.e_minus:
        raise ValueError("party 1 must carry the larger level splitting")
    return (alpha - beta) * (params1.e_minus - params2.e_minus)
