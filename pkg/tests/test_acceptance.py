"""Acceptance criteria 1-9, one test each.

Each test prints a PASS/FAIL line with the measured values; the lines
are repeated in the terminal summary. Run standalone with
``python tests/test_acceptance.py``.
"""

import pytest

from genlimit import suites

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # standalone run
    ACCEPTANCE_LINES = []


@pytest.mark.parametrize("check", suites.ACCEPTANCE, ids=lambda f: f.__name__)
def test_criterion(check):
    result = check()
    line = result.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, line


if __name__ == "__main__":
    for check in suites.ACCEPTANCE:
        print(check().line(), flush=True)
