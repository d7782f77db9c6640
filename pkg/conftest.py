"""Shared pytest fixtures."""

import pytest

from models.types import InitialState, SirParameters
from utils.logger import setup_logging


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    setup_logging("WARNING")


@pytest.fixture
def init():
    """x0 = 0.8, y0 = 0.2, z0 = 0 (N = 1)."""
    return InitialState(x0=0.8, y0=0.2, z0=0.0)


@pytest.fixture
def outbreak_params():
    """R0 = 3: the epidemic burns out towards (0, 0, N)."""
    return SirParameters(b=0.3, c=0.1, h=0.05)


@pytest.fixture
def fading_params():
    """R0 = 0.5: x settles at alpha ~ 0.636."""
    return SirParameters(b=0.3, c=0.6, h=0.05)
