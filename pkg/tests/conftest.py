import math

import pytest

from fubm.curve import build_curve
from fubm.spectrum import density_table

T_GRID = (0.5, 1.0, 2.0, 3.0, 3.9)
THRESHOLD_GRID = (2.0 + math.sqrt(3.0) - 0.05, 2.0 + math.sqrt(3.0) + 0.05, 3.99)
SAMPLES = 4096
GRID = 2001

_curves = {}
_tables = {}

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES = []


def get_curve(t):
    if t not in _curves:
        _curves[t] = build_curve(t, SAMPLES)
    return _curves[t]


def get_table(t):
    if t not in _tables:
        _tables[t] = density_table(get_curve(t), GRID)
    return _tables[t]


@pytest.fixture(scope="session")
def curves():
    return get_curve


@pytest.fixture(scope="session")
def tables():
    return get_table


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
