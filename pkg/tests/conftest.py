import numpy as np
import pytest

from shearframes.filters import spectral_factorize
from shearframes.systems import make_compact_system, make_classical_system


@pytest.fixture(scope="session")
def pair15():
    return spectral_factorize(15, 10)


@pytest.fixture(scope="session")
def pair39():
    return spectral_factorize(39, 19)


@pytest.fixture(scope="session")
def compact2d():
    """Small certified-style compact system for transform tests."""
    return make_compact_system(dim=2, K=15, L=10, J_max=8, c=(1.0, 1.0))


@pytest.fixture(scope="session")
def compact2d_half():
    return make_compact_system(dim=2, K=15, L=10, J_max=8, c=(0.5, 0.5))


@pytest.fixture(scope="session")
def compact3d():
    return make_compact_system(dim=3, K=15, L=10, J_max=6, c=(1.0, 1.0))


@pytest.fixture(scope="session")
def classical():
    return make_classical_system(J_max=4, c=(1.0, 1.0))


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
