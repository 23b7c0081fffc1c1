import numpy as np
import pytest
from hypothesis import strategies as st

from opss import BipartiteGraph


@pytest.fixture
def g0():
    # 0 -> {0, 1}, 1 -> {1, 2}, 2 -> {3}
    return BipartiteGraph(3, 4, ((0, 1), (1, 2), (3,)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240)


@st.composite
def graphs(draw, max_left=6, max_right=8):
    n = draw(st.integers(1, max_left))
    m = draw(st.integers(1, max_right))
    rows = draw(st.lists(st.sets(st.integers(0, m - 1)), min_size=n, max_size=n))
    return BipartiteGraph.from_sets(m, rows)


def brute_union(g, s):
    out = set()
    for u in s:
        out |= set(g.adjacency[u])
    return out


CRITERIA: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion and print it."""

    def _report(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        CRITERIA.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
