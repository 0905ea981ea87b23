import numpy as np
import pytest
from hypothesis import settings, strategies as st

from evocut.graph import Graph

from oracles import random_edges

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def graphs(draw, max_nodes=50):
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    density = draw(st.sampled_from([0.03, 0.08, 0.2, 0.5]))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    edges = random_edges(np.random.default_rng(seed), n, density)
    return Graph.from_edges(n, edges), edges


@pytest.fixture
def path4():
    # a-b-c-d as 0-1-2-3
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star5():
    return Graph.from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
