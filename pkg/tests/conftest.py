import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from infodyn import make_grid

settings.register_profile("infodyn", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("infodyn")

# the default box used throughout: (-20, 20) with 2048 points
GRID = make_grid(-20.0, 20.0, 2048)


@pytest.fixture
def grid():
    return GRID


@pytest.fixture
def small_grid():
    return make_grid(-12.0, 12.0, 512)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
