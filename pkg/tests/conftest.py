"""
Shared pytest configuration: the slow Monte Carlo suite runs only with
--runslow.
"""

import pytest

from pycda.core.base import ModelParams


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow Monte Carlo tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo acceptance run")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def small_params():
    """N=10, n=2 at low traffic."""
    return ModelParams.from_rho(10, 2, 0.01)
