"""Shared test plumbing.

The acceptance tests each record a one-line verdict; the hook below prints
them as a block after the normal pytest summary so the whole slate is
visible at a glance even when an individual criterion fails.
"""

import pytest

_lines = []


def record_criterion(line: str):
    _lines.append(line)


@pytest.fixture
def criterion_log():
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in _lines:
            terminalreporter.write_line(line)
