import numpy as np
import pytest

from rmoments.states import bell_state, bloch_from_density, ghz_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240)


@pytest.fixture
def bell_record():
    return bloch_from_density(bell_state())


@pytest.fixture
def ghz_record():
    return bloch_from_density(ghz_state())
