import numpy as np
import pytest

from qgcipher.quasigroup import parastrophe_set, reference_quasigroup

ACCEPTANCE_LINES = []

TABLE2 = (0.70, 0.15, 0.10, 0.05)


@pytest.fixture(scope="session")
def q4():
    return reference_quasigroup()


@pytest.fixture(scope="session")
def pset4(q4):
    return parastrophe_set(q4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
