import numpy as np
import pytest

from cc4 import nonzero_multiplier, zero_multiplier

GRID = (0.5, 1.0, 1.5, 2.0, 3.0)

#: (criterion, passed, detail) lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture(scope="session")
def zero_solutions():
    """solve_zero over the 5x5 mass grid, keyed by (x, y)."""
    return {(x, y): zero_multiplier.solve_zero(x, y) for x in GRID for y in GRID}


@pytest.fixture(scope="session")
def nonzero_solutions():
    """solve_nonzero over the 5x5 mass grid, keyed by (x, y)."""
    return {(x, y): nonzero_multiplier.solve_nonzero(x, y) for x in GRID for y in GRID}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def sorted_distances(config):
    d = config.distances()
    iu = np.triu_indices(config.n, 1)
    return np.sort(d[iu])
