"""Work bounds for systems coupled to baths at a common inverse temperature.

All quantities here are free-energy differences, i.e. upper bounds on the
extractable work rather than attained protocol values.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BadBeta
from .hamiltonians import CompositeHamiltonian
from .ergotropy import as_composite, mean_energy
from .states import DensityMatrix, _from_trusted, marginals, von_neumann_entropy


@dataclass(frozen=True)
class ThermalConfig:
    beta: float

    def __post_init__(self):
        check_beta(self.beta)


@dataclass(frozen=True)
class ThermalReport:
    beta: float
    global_work_bound: float
    local_work_bounds: tuple
    local_work_bound: float
    thermal_gap: float
    thermal_gap_free_energy_path: float
    mutual_information: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["local_work_bounds"] = list(self.local_work_bounds)
        return d


def check_beta(beta) -> float:
    b = float(beta)
    if not (math.isfinite(b) and b > 0.0):
        raise BadBeta(f"beta must be finite and positive, got {beta!r}")
    return b


def boltzmann_weights(energies, beta: float) -> np.ndarray:
    e = np.asarray(energies, dtype=float)
    w = np.exp(-beta * (e - e.min()))
    return w / w.sum()


def log_partition_function(energies, beta: float) -> float:
    e = np.asarray(energies, dtype=float)
    e0 = e.min()
    return float(-beta * e0 + np.log(np.sum(np.exp(-beta * (e - e0)))))


def gibbs_state(h, beta: float) -> DensityMatrix:
    """``exp(-beta H) / Z`` built from the cached spectrum, with the ground weight factored out."""
    beta = check_beta(beta)
    h = as_composite(h)
    s = h.spectrum
    m = (s.eigenvectors * boltzmann_weights(s.eigenvalues, beta)) @ s.eigenvectors.conj().T
    return _from_trusted(h.dims, 0.5 * (m + m.conj().T))


def free_energy(rho: DensityMatrix, h, beta: float) -> float:
    beta = check_beta(beta)
    return mean_energy(rho, h) - von_neumann_entropy(rho) / beta


def gibbs_free_energy(h, beta: float) -> float:
    """``-ln(Z) / beta``."""
    beta = check_beta(beta)
    return -log_partition_function(as_composite(h).spectrum.eigenvalues, beta) / beta


def extractable_work_cb(rho: DensityMatrix, h, beta: float) -> float:
    """Bound on work extractable with a bath: ``F(rho) - F(gibbs)``."""
    return free_energy(rho, h, beta) - gibbs_free_energy(h, beta)


def thermal_gap(rho: DensityMatrix, h, beta: float) -> float:
    """Global minus summed local bath-assisted work bounds, i.e. total correlation over beta."""
    beta = check_beta(beta)
    as_composite(h).check_dims(rho.dims)
    s_local = sum(von_neumann_entropy(m) for m in marginals(rho))
    return (s_local - von_neumann_entropy(rho)) / beta


def thermal_report(rho: DensityMatrix, h, beta: float) -> ThermalReport:
    beta = check_beta(beta)
    h = as_composite(h)
    w_global = extractable_work_cb(rho, h, beta)
    w_locals = tuple(
        extractable_work_cb(m, CompositeHamiltonian((hi,)), beta) for m, hi in zip(marginals(rho), h.locals)
    )
    gap = thermal_gap(rho, h, beta)
    return ThermalReport(
        beta=beta,
        global_work_bound=w_global,
        local_work_bounds=w_locals,
        local_work_bound=float(sum(w_locals)),
        thermal_gap=gap,
        thermal_gap_free_energy_path=w_global - float(sum(w_locals)),
        mutual_information=gap * beta,
    )
