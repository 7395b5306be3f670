from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from hcyclic.matrix_core import omega

# fixed example sequence, so a green run is reproducible
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

DATA = Path(__file__).parent / "data"

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def ex2():
    """The 6x6 three-cyclic worked example with row sums 1."""
    B = np.array([
        [0, 0, 1, 2, 0, 0],
        [0, 0, 2, 1, 0, 0],
        [0, 0, 0, 0, 1, 2],
        [0, 0, 0, 0, 2, 1],
        [1, 2, 0, 0, 0, 0],
        [2, 1, 0, 0, 0, 0],
    ])
    return B / 3.0


@pytest.fixture
def ex2_Z():
    w = omega(3)
    return np.array([
        [1, 1, 1, 1, 1, 1],
        [1, 1, 1, -1, -1, -1],
        [1, w, w**2, 1, w, w**2],
        [1, w, w**2, -1, -w, -w**2],
        [1, w**2, w, 1, w**2, w],
        [1, w**2, w, -1, -w**2, -w],
    ])


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)
