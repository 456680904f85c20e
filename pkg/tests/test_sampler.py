import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from gsp_euler.gamma import PrecompTables, build_tables
from gsp_euler.generate import random_tree
from gsp_euler.oracle import (
    brute_canonical,
    enumerate_decompositions,
    enumerate_tours,
    normalize,
    validate_tour,
)
from gsp_euler.sampler import (
    Decomposition,
    SeriesTuple,
    TourSampler,
    TourTuple,
    DanglingTuple,
    canonical_tour,
    combine_dangling,
    combine_parallel,
    combine_series,
    decomposition_to_tour,
    derive_rng,
    format_tour_edges,
    leaf_decomposition,
    normalize_trail,
    random_composition,
    sample_root_k,
    sample_split,
    sample_tour,
    weighted_index,
)
from gsp_euler.tree import parse_tree, realize_terminals

from conftest import DANGLING_DIGON, DIGON, DOUBLE_DIGON, FOUR_PARALLEL


def tables_of(text):
    t = parse_tree(text)
    return t, build_tables(t)


def test_weighted_index_exact_range():
    rng = random.Random(1)
    assert {weighted_index(rng, [0, 5, 0]) for _ in range(50)} == {1}
    with pytest.raises(ValueError):
        weighted_index(rng, [0, 0])


def test_weighted_index_big_weights():
    rng = random.Random(2)
    w = [1, 10**40]
    assert Counter(weighted_index(rng, w) for _ in range(200))[1] == 200


@given(st.integers(0, 12), st.integers(1, 6), st.integers(0, 2**32))
def test_random_composition_shape(total, parts, seed):
    x = random_composition(random.Random(seed), total, parts)
    assert len(x) == parts and sum(x) == total and min(x) >= 0


def test_random_composition_uniform():
    # 4 balls in 3 boxes: 15 compositions, each equally likely
    rng = random.Random(3)
    counts = Counter(tuple(random_composition(rng, 4, 3)) for _ in range(15000))
    assert len(counts) == 15
    assert max(counts.values()) < 1250 and min(counts.values()) > 750


@given(st.lists(st.integers(1, 20).flatmap(lambda n: st.sampled_from([n, -n])), min_size=1, max_size=6, unique_by=abs))
def test_normalize_idempotent(trail):
    once = normalize_trail(trail)
    assert normalize_trail(once) == once
    assert once == normalize(trail)


@given(st.permutations(list(range(1, 8))), st.lists(st.booleans(), min_size=7, max_size=7))
def test_canonical_tour_matches_brute_force(labels, flips):
    darts = [l if f else -l for l, f in zip(labels, flips)]
    assert canonical_tour(darts) == brute_canonical(darts)


def test_root_k_examples():
    rng = random.Random(4)
    for text, want in ((DIGON, 2), (DOUBLE_DIGON, 2), (FOUR_PARALLEL, 4)):
        t, tables = tables_of(text)
        pre = PrecompTables(t.max_degree())
        assert {sample_root_k(tables[t.root.id], rng, pre) for _ in range(40)} == {want}


def test_split_examples():
    rng = random.Random(5)
    t, tables = tables_of(DIGON)
    L, R = tables[0], tables[1]
    assert {sample_split("P", L, R, 2, rng) for _ in range(20)} == {(1, 1)}
    t, tables = tables_of(DOUBLE_DIGON)
    L, R = tables[t.root.left.id], tables[t.root.right.id]
    assert {sample_split("S", L, R, 0, rng) for _ in range(20)} == {(2, 2)}
    t, tables = tables_of(DANGLING_DIGON)
    L, R = tables[t.root.left.id], tables[t.root.right.id]
    assert {sample_split("D", L, R, 2, rng)[1] for _ in range(20)} == {2}


def test_combine_parallel_digon():
    C = combine_parallel(leaf_decomposition(1, 0, 1), leaf_decomposition(2, 0, 1))
    assert C.k == 2 and len(C.trails) == 2
    with pytest.raises(ValueError):
        combine_parallel(leaf_decomposition(1, 0, 1), leaf_decomposition(1, 0, 1))


def _double_digon_children():
    t = parse_tree(DOUBLE_DIGON)
    g, terms = realize_terminals(t)
    (s, v), (_, u) = terms[t.root.left.id], terms[t.root.right.id]
    C1 = combine_parallel(leaf_decomposition(1, s, v), leaf_decomposition(2, s, v))
    C2 = combine_parallel(leaf_decomposition(3, v, u), leaf_decomposition(4, v, u))
    return g, C1, C2


def test_combine_series_identity_tuple():
    g, C1, C2 = _double_digon_children()
    C = combine_series(g, C1, C2, 2, SeriesTuple([0, 1], [0, 1], [0, 0], [], []))
    assert C.signature() == ((1, 3), (2, 4))
    C = combine_series(g, C1, C2, 0, SeriesTuple([0, 1], [0, 1], [0, 0], [], []))
    assert C.k == 0 and C.signature() == ((-3, 4), (1, -2))
    assert len(C.trails) == 2


def test_combine_dangling_digon():
    t = parse_tree(DANGLING_DIGON)
    g, terms = realize_terminals(t)
    (s, u), (_, w) = terms[t.root.left.id], terms[t.root.right.id]
    C1 = combine_parallel(leaf_decomposition(1, s, u), leaf_decomposition(2, s, u))
    C2 = combine_parallel(leaf_decomposition(3, s, w), leaf_decomposition(4, s, w))
    C = combine_dangling(g, C1, C2, DanglingTuple([0, 1], [0], [], []))
    assert C.k == 2 and C.s_loops == [(3, -4)]
    assert len(C.trails) == len(C1.trails) + C2.k // 2 + len(C2.s_loops)


def test_tour_from_digon_decomposition():
    t = parse_tree(DIGON)
    g, _ = realize_terminals(t)
    C = Decomposition(0, 1, paths=[(1,), (2,)])
    tour = decomposition_to_tour(g, C, TourTuple([0], [], [], [0], [0], []))
    assert tour == (1, -2) and format_tour_edges(tour) == "1:+,2:-"


def test_double_digon_tours_from_tuples():
    g, C1, C2 = _double_digon_children()
    tours = set()
    for pi2 in ([0, 1], [1, 0]):
        C = combine_series(g, C1, C2, 2, SeriesTuple([0, 1], pi2, [0, 0], [], []))
        tours.add(decomposition_to_tour(g, C, TourTuple([0], [], [], [0], [0], [])))
    assert tours == enumerate_tours(g).tours


def test_digon_unique_tour_any_seed():
    t = parse_tree(DIGON)
    assert {sample_tour(t, seed) for seed in range(20)} == {(1, -2)}


def test_determinism():
    t = parse_tree(DOUBLE_DIGON)
    assert TourSampler(t).sample_many(99, 30) == TourSampler(t).sample_many(99, 30)
    assert derive_rng(5, 0).random() != derive_rng(5, 1).random()


def test_double_digon_frequencies():
    t = parse_tree(DOUBLE_DIGON)
    counts = Counter(TourSampler(t).sample_many(2024, 10000))
    assert len(counts) == 2
    # 5 sigma of a fair binomial with n = 10000 is 250
    assert all(abs(c - 5000) <= 250 for c in counts.values())


def test_samples_validate_and_cover(small_eulerian_trees):
    for t in small_eulerian_trees:
        sampler = TourSampler(t)
        tours = enumerate_tours(sampler.graph).tours
        seen = set()
        for tour in sampler.sample_many(7, 40 * len(tours)):
            assert validate_tour(sampler.graph, tour)
            seen.add(tour)
        assert seen == tours


def test_sampled_decompositions_are_in_census(medium_random_trees):
    for t in medium_random_trees[:8]:
        sampler = TourSampler(t)
        census = enumerate_decompositions(sampler.graph)
        for i in range(30):
            C = sampler.sample_decomposition(derive_rng(11, i))
            assert C.signature() in census.by_k[C.k]


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 200), st.integers(0, 2**32))
def test_samples_validate_on_random_trees(m, seed):
    t = random_tree(m, random.Random(seed), max_degree=10)
    sampler = TourSampler(t)
    tour = sampler.sample(derive_rng(seed, 0))
    assert validate_tour(sampler.graph, tour)
    assert tour == canonical_tour(tour)
