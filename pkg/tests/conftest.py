import numpy as np
import pytest

from bmsde import GridSpec, from_edge_perspective

import oracles


@pytest.fixture(scope="session")
def grid():
    return GridSpec()


@pytest.fixture(scope="session")
def dd36():
    return from_edge_perspective(oracles.LAM_36, oracles.RHO_36)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260822)
