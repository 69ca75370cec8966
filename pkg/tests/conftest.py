import random

import pytest
from hypothesis import strategies as st

from thompson_links.group import Element
from thompson_links.trees import TreePair, all_trees, random_pair


def tree_with(n: int):
    return st.sampled_from(all_trees(n))


def pairs(min_leaves: int = 1, max_leaves: int = 7):
    """Tree pairs (not necessarily reduced) with equal leaf counts."""
    return st.integers(min_leaves, max_leaves).flatmap(
        lambda n: st.builds(TreePair, tree_with(n), tree_with(n)))


def elements(min_leaves: int = 1, max_leaves: int = 7):
    return pairs(min_leaves, max_leaves).map(Element)


def random_elements(rng: random.Random, count: int, lo: int = 2, hi: int = 8, max_depth: int | None = None):
    return [Element(random_pair(rng.randint(lo, hi), rng, max_depth)) for _ in range(count)]


@pytest.fixture
def rng():
    return random.Random(20261019)


# -- acceptance summary ----------------------------------------------------------

ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(ACCEPTANCE_RESULTS[k])
