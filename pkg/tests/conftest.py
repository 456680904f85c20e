import random

import pytest

from gsp_euler.generate import legal_eulerian_trees, random_tree
from gsp_euler.tree import parse_tree

DIGON = "P(B,B)"
TRIANGLE = "P(B,S(B,B))"
DOUBLE_DIGON = "S(P(B,B),P(B,B))"
FOUR_PARALLEL = "P(P(B,B),P(B,B))"
DANGLING_DIGON = "D(P(B,B),P(B,B))"

# tour counts confirmed by the brute-force enumerator (see test_oracle)
GOLDEN_COUNTS = {
    DIGON: 1,
    TRIANGLE: 1,
    DOUBLE_DIGON: 2,
    FOUR_PARALLEL: 6,
    DANGLING_DIGON: 2,
}


@pytest.fixture(scope="session")
def small_eulerian_trees():
    return list(legal_eulerian_trees(5))


@pytest.fixture(scope="session")
def medium_random_trees():
    rng = random.Random(20240611)
    return [random_tree(rng.randint(7, 10), rng, max_degree=8) for _ in range(25)]


def tree(text):
    return parse_tree(text)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def record_criterion(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
