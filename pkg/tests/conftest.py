from pathlib import Path

import pytest

from dyadic_dilatations.textformat import parse_workspace

DATA = Path(__file__).parent / "data"
FIXTURES = DATA / "fixtures.ws"


@pytest.fixture(scope="session")
def ws():
    return parse_workspace(FIXTURES.read_text())


@pytest.fixture(scope="session")
def machines(ws):
    return ws.machines


@pytest.fixture(scope="session")
def structures(ws):
    return ws.structures


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
