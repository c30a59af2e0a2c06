import pytest

from lqlab import BrownianDrift, CompoundPoissonNegative, CompoundPoissonPositive, Stable

from reporting import LINES


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def bm():
    return BrownianDrift(1.0)


@pytest.fixture
def cpp():
    return CompoundPoissonPositive(1.0, 1.0)


@pytest.fixture
def cpn():
    return CompoundPoissonNegative(2.0, 1.0)


@pytest.fixture
def stable():
    return Stable(1.5, 0.0)


@pytest.fixture
def stable_sp():
    return Stable(1.5, 1.0)
