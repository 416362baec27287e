import random

import pytest

from uesroute.cubic import matching_to_graph, random_cubic_mate
from uesroute.search import SequenceFamily, find_ues

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def family():
    return SequenceFamily(seed=11, strategy="incremental_fix")


@pytest.fixture(scope="session")
def t4():
    seq = find_ues(4, "incremental_fix", seed=0)
    assert seq, seq
    return seq


def random_cubic(n, seed):
    return matching_to_graph(random_cubic_mate(n, random.Random(seed), connected=True))
