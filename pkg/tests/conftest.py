import numpy as np
import pytest
from hypothesis import settings

from measurecond.linalg import CompositeSpace

from helpers import SQRT_HALF, ket

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def space22():
    return CompositeSpace(2, 2)


@pytest.fixture
def bell():
    """(e0⊗e1 + e1⊗e0)/√2."""
    return ket(0, SQRT_HALF, SQRT_HALF, 0)
