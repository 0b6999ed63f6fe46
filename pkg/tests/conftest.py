"""Shared fixtures for the zpygate tests."""

import pytest

from zpygate.config import RunConfig
from zpygate.core.propagation import PropagationConfig


@pytest.fixture(scope="session")
def device():
    """The shipped two-transmon device at zero detuning."""
    return RunConfig().device_spec()


@pytest.fixture(scope="session")
def fast_config():
    """Looser integration settings for optimizer-heavy tests."""
    return PropagationConfig(abs_tol=1e-10, rel_tol=1e-10)
