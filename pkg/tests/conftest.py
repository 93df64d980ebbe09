import pytest

from genlimit.universe import INTEGERS

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ints():
    return INTEGERS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
