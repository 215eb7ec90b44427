import functools

import pytest

from fusionkit import catalog


@functools.lru_cache(maxsize=None)
def entry(name):
    return catalog.build(name)


@functools.lru_cache(maxsize=None)
def system(name):
    return entry(name).fusion


@pytest.fixture(scope="session")
def so3():
    return system("so3:l=3")


@pytest.fixture(scope="session")
def su2():
    return system("su2:l=3")


@pytest.fixture(scope="session")
def sym4_fusion():
    return system("oracle:sym4,p=2")


# acceptance results, filled by test_acceptance.py and echoed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[cid])
