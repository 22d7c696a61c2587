import math

import pytest

from idepredict.models import frequency_manifold, geometry, identity_manifold, ula_manifold
from idepredict.predictor import BetaPrior
from idepredict.utilities import configure_logging


@pytest.fixture
def tone():
    """16-sample unit-amplitude tone, the running frequency example."""
    return frequency_manifold(16, 1.0)


@pytest.fixture
def identity():
    return identity_manifold()


@pytest.fixture
def ula15():
    return ula_manifold(15, 1.0)


@pytest.fixture
def prior10():
    return BetaPrior(10.0)


@pytest.fixture
def reference_array():
    return geometry.reference_array()


@pytest.fixture
def doa_truth():
    return (math.radians(25.0), math.radians(60.0))


@pytest.fixture(autouse=True)
def _release_log_handlers():
    """Detach handlers that CLI runs bound to captured streams."""
    yield
    configure_logging()
