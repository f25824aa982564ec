import numpy as np
import pytest

from cohtele.sampling import DEFAULT_SEED

ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
