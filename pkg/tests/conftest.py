import math

import pytest

from lateral_cp.materials import get_material
from lateral_cp.observables import EmitterConfig

LAM = 852e-9

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def gold():
    return get_material("gold")


@pytest.fixture(scope="session")
def silica():
    return get_material("silica")


@pytest.fixture(scope="session")
def pc():
    return get_material("pc")


@pytest.fixture(scope="session")
def vacuum():
    return get_material("vacuum")


@pytest.fixture
def cfg():
    return EmitterConfig(z_A=LAM / 4)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
