import numpy as np
import pytest

from smallball.bounds import load_constants
from smallball.chains import (
    make_independent_chain,
    make_two_state_chain,
    make_weight_system,
    parity_labels,
    repeated_signs,
)


@pytest.fixture(scope="session")
def constants():
    return load_constants()


@pytest.fixture(scope="session")
def uniform_independent():
    return make_independent_chain([0.5, 0.5])


@pytest.fixture
def two_state_03():
    return make_two_state_chain(0.3)


def balanced_signs(chain, n):
    return repeated_signs(parity_labels(chain.n_states), n, chain.stationary,
                          balanced=True)


def ones_weights(n):
    return make_weight_system(np.ones(n))
