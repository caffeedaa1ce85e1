"""
Shared fixtures for the unit and integration suites
"""

import numpy as np
import pytest

from screenlab.farfield import build_grid
from screenlab.tensor import SurfaceTensor


@pytest.fixture(scope='session')
def kappa():
    return 1.9


@pytest.fixture(scope='session')
def lossless_sigma():
    return SurfaceTensor(a=0.5j)


@pytest.fixture(scope='session')
def grid96():
    return build_grid(96)


@pytest.fixture(scope='session')
def grid24():
    return build_grid(24)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

