import numpy as np
import pytest

from app.services.fixtures import gen_illustration, gen_layers


@pytest.fixture
def illustration():
    return gen_illustration(128, 96, 6, seed=7)


@pytest.fixture
def illustration_layers(illustration):
    return gen_layers(illustration)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
