import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from ordcomplete.poset import validate_poset

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@st.composite
def posets(draw, min_size=1, max_size=7, prefix="x"):
    n = draw(st.integers(min_size, max_size))
    labels = [f"{prefix}{i}" for i in range(n)]
    perm = draw(st.permutations(labels))
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return validate_poset(labels, pairs)


@pytest.fixture
def chain3():
    return validate_poset("abc", [("a", "b"), ("b", "c")])


@pytest.fixture
def antichain2():
    return validate_poset("ab")


@pytest.fixture
def diamond():
    return validate_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


_ACCEPTANCE_LINES = []


def record(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
