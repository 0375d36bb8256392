import numpy as np
import pytest

from gapkit.oracle import BathModeSet
from gapkit.units import PhysicalContext


@pytest.fixture
def ctx300():
    return PhysicalContext(300.0)


@pytest.fixture
def ctx77():
    return PhysicalContext(77.0)


@pytest.fixture
def single_mode():
    return BathModeSet.single(100.0, 0.5)


@pytest.fixture
def three_modes():
    return BathModeSet(np.array([150.0, 500.0, 1100.0]), np.array([0.5, 0.2, 0.05]))


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, title, passed, detail)``."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(number, title, passed, detail):
        lines.append((number, title, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = sorted(config.stash.get(_ACCEPTANCE_KEY, []))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in lines:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail}")
