"""Shared test infrastructure: the acceptance-criteria summary block.

Acceptance tests record one line per criterion through the
record_criterion fixture; the lines are printed after the run so the
pass/fail status of every criterion is visible in the terminal output
regardless of capture settings.
"""

import pytest

_CRITERION_LINES = []


@pytest.fixture
def record_criterion():
    def _record(number, status, detail):
        label = {True: "PASS", False: "FAIL"}.get(status, str(status))
        _CRITERION_LINES.append((number, f"CRITERION {number}: {label} - {detail}"))
        return status

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)
