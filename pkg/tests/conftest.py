import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from doctrinelab import catalog

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ps20():
    return catalog.instance("PS(2,0)")


@pytest.fixture(scope="session")
def ps11():
    return catalog.instance("PS(1,1)")


@pytest.fixture(scope="session")
def sier():
    return catalog.instance("SIER")


@pytest.fixture(scope="session")
def triv():
    return catalog.instance("TRIV")


@pytest.fixture(scope="session")
def sl3():
    return catalog.instance("SL3")
