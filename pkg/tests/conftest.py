import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cubelab.cubes import CubeSpec, required_length
from cubelab.orbits import Cyclic, Table, orbit

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def cyclic_cube(rng, k, N, p=None):
    """Random cube on a cyclic system, one table per function."""
    p = int(rng.integers(2, 9)) if p is None else p
    x0 = int(rng.integers(0, p))
    system = Cyclic(p)
    length = required_length(k, N)
    orbs = [orbit(system, Table(rng.uniform(-1, 1, p)), x0, length) for _ in range((1 << k) - 1)]
    return CubeSpec(k, N, orbs)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
