import numpy as np
import pytest

from gpdtail import GpdParams, sample


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def heavy_tail_excesses():
    """200 draws from GPD(0, 1, 0.3): the shared optimizer test sample."""
    return sample(GpdParams(0.0, 1.0, 0.3), 200, np.random.default_rng(404))
