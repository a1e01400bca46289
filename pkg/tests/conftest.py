import numpy as np
import pytest

from se2gabor.grid2d import GridSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def grid128():
    return GridSpec(128, 1.0)


@pytest.fixture(scope="session")
def grid64():
    return GridSpec(64, 1.0)
