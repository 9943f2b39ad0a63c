from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from treeflow.instance import Instance, read_instance

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def instances(draw, min_n: int = 2, max_n: int = 12, max_cap: int = 4, min_terminals: int = 0):
    """Random trees: vertex i attaches to a uniform earlier vertex."""
    n = draw(st.integers(min_n, max_n))
    edges = []
    for child in range(2, n + 1):
        parent = draw(st.integers(1, child - 1))
        cap = draw(st.integers(0, max_cap))
        a, b = (parent, child) if draw(st.booleans()) else (child, parent)
        edges.append((a, b, cap))
    k = draw(st.integers(min(min_terminals, n), n))
    terms = draw(st.permutations(range(1, n + 1)))[:k]
    return Instance.from_edges(n, edges, terms)


@pytest.fixture
def star() -> Instance:
    return read_instance(DATA / "star.tree")


@pytest.fixture
def dominating() -> Instance:
    return read_instance(DATA / "dominating.tree")


def corpus() -> list[Path]:
    return sorted(DATA.glob("*.tree"))
