import numpy as np
import pytest

from dcrlab.field import Grid1D, random_field
from dcrlab.hermite import build_basis


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


@pytest.fixture
def small_field(rng):
    return random_field(Grid1D(64, 12.0), build_basis(8), rng)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
