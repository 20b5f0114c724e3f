import sys

import numpy as np
import pytest

from ergogap import hamiltonians


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_levels(rng, d, low=-1.0, high=1.0):
    return np.sort(rng.uniform(low, high, d))


def random_local_hamiltonian(rng, d):
    """Hermitian matrix with a random (generally non-diagonal) eigenbasis."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


def random_diagonal_hamiltonian(rng, dims):
    return hamiltonians.compose([random_levels(rng, d) for d in dims])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
