import numpy as np
import pytest

from src.core.rng import Rng, rng_normal


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return Rng(1234)


@pytest.fixture
def metric(rng):
    """Well-conditioned 6 x 6 metric D^T D + 0.5 I."""
    D = rng_normal(rng, (4, 6), 0.0, 0.5)
    return D.T @ D + 0.5 * np.eye(6)
