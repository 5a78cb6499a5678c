import numpy as np
import pytest

from beamspec.grid import make_grid, sample
from beamspec.spectrum import eigen_pencil


@pytest.fixture(scope="session")
def grid800():
    return make_grid(800)


@pytest.fixture(scope="session")
def one800(grid800):
    return sample(lambda t: np.ones_like(t), grid800)


@pytest.fixture(scope="session")
def spectrum_one800(one800):
    return eigen_pencil(one800, 6, 0)


@pytest.fixture(scope="session")
def sin3pi800(grid800):
    return sample(lambda t: np.sin(3 * np.pi * t), grid800)


@pytest.fixture(scope="session")
def spectrum_sin3pi800(sin3pi800):
    return eigen_pencil(sin3pi800, 4, 4)
