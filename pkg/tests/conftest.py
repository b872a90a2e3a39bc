import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from lightcone.minkowski import FourVector, make_propagation_vector  # noqa: E402
from lightcone.potential import plane_wave, nonphysical_gauge  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def k_z():
    return make_propagation_vector(1.0, (0.0, 0.0, 1.0))


@pytest.fixture
def pw(k_z):
    return plane_wave(FourVector(0.0, 1.0, 0.0, 0.0), k_z)


@pytest.fixture
def npw(pw):
    return nonphysical_gauge(pw)


@pytest.fixture
def random_events():
    rng = np.random.default_rng(1234)
    return [FourVector.from_iterable(row) for row in rng.uniform(-10, 10, size=(20, 4))]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
