import pytest

from entfaces.catalog import build_catalog


@pytest.fixture(scope="session")
def cat4():
    return build_catalog(4)


@pytest.fixture(scope="session")
def cat3():
    return build_catalog(3)


@pytest.fixture(scope="session")
def cat2():
    return build_catalog(2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
