import pytest

from divcover.graph import paper_instance
from divcover.landscape import paper_covers

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def g():
    return paper_instance()


@pytest.fixture(scope="session")
def V():
    """V1..V4 keyed 1..4."""
    return dict(zip((1, 2, 3, 4), paper_covers()))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
