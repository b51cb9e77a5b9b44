import numpy as np
import pytest

from gaudin_bethe.gaudin import make_space


@pytest.fixture(scope="session")
def spin_pair():
    """Two spin-1/2 sites at -1 and 1."""
    return make_space("sl2", [1, 1], [-1, 1])


@pytest.fixture(scope="session")
def fund_dual():
    """sl3 fundamental at 0 and its dual at 1."""
    return make_space("sl3", [(1, 0), (0, 1)], [0, 1])


@pytest.fixture(scope="session")
def roomy_sl3():
    """Three sl3 sites with enough room for labels up to three roots per family."""
    return make_space("sl3", [(1, 1), (2, 1), (1, 2)], [0.1 + 0.2j, 1.3 - 0.4j, -0.7 + 0.9j])


@pytest.fixture
def rng():
    return np.random.default_rng(7)
