import numpy as np
import pytest

from fuplab.dynamics import CatMapSpec
from fuplab.partition import build_partition


@pytest.fixture(scope="session")
def base_spec():
    """Unperturbed hyperbolic torus map used across suites."""
    return CatMapSpec()


@pytest.fixture(scope="session")
def kicked_spec():
    return CatMapSpec(epsilon=0.05)


@pytest.fixture(scope="session")
def hole_partition():
    """Standard two-letter partition: ball hole of support radius 0.2."""
    return build_partition()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
