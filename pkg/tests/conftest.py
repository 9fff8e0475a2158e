import numpy as np
import pytest

from smes import LinearSps, OdeSystem, eigenvalues, split_spectrum
from smes.errors import SeparationError


def random_stable_sps(rng, eps, max_n=2, max_m=2, coupling=0.5):
    """Random Hurwitz LinearSps whose spectrum separates at ``eps``."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(1, max_m + 1))
        a11 = -np.diag(rng.uniform(0.3, 2.0, n)) + 0.3 * rng.standard_normal((n, n))
        a22 = -np.diag(rng.uniform(0.5, 3.0, m)) + 0.3 * rng.standard_normal((m, m))
        a12 = coupling * rng.standard_normal((n, m))
        a21 = coupling * rng.standard_normal((m, n))
        if max(v.real for v in eigenvalues(a22)) >= 0:
            continue
        sps = LinearSps(a11, a12, a21, a22, eps)
        eigs = eigenvalues(sps.full_matrix())
        if max(v.real for v in eigs) >= 0:
            continue
        try:
            split = split_spectrum(eigs, eps, n, m)
        except SeparationError:
            continue
        return sps, eigs, split


def decay_system(rate=1.0):
    """Scalar slow test system x' = -rate x."""
    return OdeSystem("decay", 1, 0, 1.0, lambda x, u, t: -rate * np.asarray(x))


def pure_fast_system(eps, rate=1.0):
    """eps z' = -rate z, no slow states."""
    return OdeSystem("pure-fast", 0, 1, eps, lambda x, u, t: -rate * np.asarray(x) / eps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
