import numpy as np
import pytest

from ccs_tunneling import GridSpec, WellParams, make_grid

SQRT8 = np.sqrt(8.0)

# lines reported by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def params():
    return WellParams(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def dense_grid():
    """49 sub-barrier labels around the right minimum and the occupied index."""
    return make_grid(GridSpec())


def random_labels(rng, n, radius=3.0):
    """Uniform labels in the disc ``|z| <= radius``."""
    r = radius * np.sqrt(rng.uniform(size=n))
    phi = rng.uniform(0, 2 * np.pi, size=n)
    return r * np.exp(1j * phi)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
