import pytest

from slope_kernel.core import DUCHON_JUMPS
from slope_kernel.enumeration import excursion_area_sums, knuth_sequences

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def knuth250():
    return knuth_sequences(250)


@pytest.fixture(scope="session")
def duchon1500():
    return excursion_area_sums(DUCHON_JUMPS, 1500)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
