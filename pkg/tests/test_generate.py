import random

import pytest
from hypothesis import given, settings, strategies as st

from gsp_euler.generate import all_trees, legal_eulerian_trees, random_tree
from gsp_euler.tree import check_legal


def test_all_trees_counts():
    # binary shapes (Catalan) times 3 operators per internal node
    catalan = [1, 1, 2, 5, 14, 42]
    for n in range(1, 7):
        assert sum(1 for _ in all_trees(n, n)) == catalan[n - 1] * 3 ** (n - 1)


def test_legal_eulerian_filter():
    for t in legal_eulerian_trees(4):
        rep = check_legal(t)
        assert rep.legal and rep.root_eulerian


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 500), st.sampled_from([4, 6, 8, 32]), st.booleans(), st.integers(0, 2**32))
def test_random_tree_contract(m, cap, eulerian, seed):
    t = random_tree(m, random.Random(seed), max_degree=cap, eulerian=eulerian)
    rep = check_legal(t)
    assert t.m == m and rep.legal
    assert t.max_degree() <= cap
    if eulerian:
        assert rep.root_eulerian


def test_random_tree_large():
    t = random_tree(100000, random.Random(1), max_degree=32)
    assert t.m == 100000 and t.max_degree() <= 32


def test_random_tree_arguments():
    with pytest.raises(ValueError):
        random_tree(1, random.Random(0))
    with pytest.raises(ValueError):
        random_tree(5, random.Random(0), max_degree=3)
