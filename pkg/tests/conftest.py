import numpy as np
import pytest

from bergman_dual.quad import QuadSpec


@pytest.fixture(scope="session")
def q():
    return QuadSpec()


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the lines are echoed and repeated in the terminal summary."""

    def record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {detail}"
        ACCEPTANCE[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
