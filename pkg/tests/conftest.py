from pathlib import Path

import pytest

from dfo.parser import parse_structure

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_LINES = []


@pytest.fixture
def sample():
    return parse_structure((FIXTURES / "sample.txt").read_text())


@pytest.fixture
def fixtures():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
