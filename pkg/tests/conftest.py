import math

import pytest

from stokes_thermo.model import ExperimentModel

_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one pass/fail line for the acceptance summary."""

    def _report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda x: x[0]):
        terminalreporter.write_line(line)


@pytest.fixture
def rb_cell():
    """87Rb pencil cell at 1 K, 10 us pulse."""
    return ExperimentModel.build(1.0, tau=10e-6)


# reduced resolution for unit tests that sweep many temperatures
FAST = dict(n_points=401, n_nodes=128)


def deg(x):
    return math.radians(x)
