"""Ergotropy, local ergotropy and the ergotropic gap for multi-party quantum states."""

__version__ = "0.1.0"

from .ergotropy import (
    WorkReport,
    bell_mixture_gap,
    ergotropic_gap,
    global_ergotropy,
    local_ergotropy,
    passive_energy,
    passive_state,
    two_qubit_gap_closed_form,
)
from .hamiltonians import CompositeHamiltonian, LocalHamiltonian, compose, qubit_params
from .states import DensityMatrix, is_classically_correlated, partial_trace, validate, von_neumann_entropy
from .thermal import extractable_work_cb, free_energy, gibbs_state, thermal_gap

__all__ = [
    "CompositeHamiltonian",
    "DensityMatrix",
    "LocalHamiltonian",
    "WorkReport",
    "bell_mixture_gap",
    "compose",
    "ergotropic_gap",
    "extractable_work_cb",
    "free_energy",
    "gibbs_state",
    "global_ergotropy",
    "is_classically_correlated",
    "local_ergotropy",
    "partial_trace",
    "passive_energy",
    "passive_state",
    "qubit_params",
    "thermal_gap",
    "two_qubit_gap_closed_form",
    "validate",
    "von_neumann_entropy",
]
