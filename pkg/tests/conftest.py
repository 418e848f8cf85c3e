import sys
from pathlib import Path

import numpy as np
import pytest

from plankbound.geometry import Polytope, cube, regular_polygon

sys.path.insert(0, str(Path(__file__).parent))

SQUARE = [[-1, -1], [1, -1], [1, 1], [-1, 1]]
TRIANGLE = [[0, 0], [1, 0], [0, 1]]


def random_polytope(rng, d, n):
    kind = rng.integers(3)
    if kind == 0:
        P = rng.normal(size=(n, d))
    elif kind == 1:
        P = rng.uniform(-1, 1, size=(n, d))
    else:
        # skewed and shifted so the John map has work to do
        S = rng.normal(size=(d, d)) + 2.0 * np.eye(d)
        P = rng.normal(size=(n, d)) @ S.T + rng.normal(size=d) * 3.0
    return Polytope(P)


def make_corpus(count=50, seed=2024):
    rng = np.random.default_rng(seed)
    bodies = []
    for i in range(count):
        d = 2 + i % 4
        n = int(rng.integers(8, 41))
        bodies.append(random_polytope(rng, d, n))
    return bodies


@pytest.fixture(scope="session")
def corpus():
    return make_corpus()


@pytest.fixture
def square():
    return Polytope(np.array(SQUARE, dtype=float))


@pytest.fixture
def triangle():
    return Polytope(np.array(TRIANGLE, dtype=float))


@pytest.fixture
def polygon64():
    return regular_polygon(64)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line[1])


__all__ = ["SQUARE", "TRIANGLE", "cube", "make_corpus", "random_polytope"]
