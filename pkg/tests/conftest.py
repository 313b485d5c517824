import pytest

from ktgspin.build import braid_closure, free_loop, planar_theta
from ktgspin.ktgio import CORPUS, load_corpus

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    return {name: load_corpus(name) for name in CORPUS}


@pytest.fixture(scope="session")
def trefoil():
    return braid_closure([1, 1, 1], 2, "trefoil")


@pytest.fixture(scope="session")
def figure_eight():
    return braid_closure([1, -2, 1, -2], 3, "figure-eight")


@pytest.fixture(scope="session")
def theta():
    return planar_theta()


@pytest.fixture(scope="session")
def unknot():
    return free_loop()
