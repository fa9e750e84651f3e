import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catagg.coloring import (
    combined_coloring,
    parse_coloring,
    partition_matrix,
    special_coloring,
    tree_coloring,
)
from catagg.graph import Graph, permute_graph
from catagg.oracles import unfold
from conftest import K3, P3, graphs

C6 = Graph(6, tuple((i, (i + 1) % 6) for i in range(6)))
TWO_TRIANGLES = Graph(6, ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)))


@given(graphs())
def test_height_zero_is_one_color(g):
    assert set(tree_coloring(g, 0).colors) == {"0"}


def test_p3_degree_classes():
    assert tree_coloring(P3, 1).partition() == frozenset({frozenset({0, 2}), frozenset({1})})


@pytest.mark.parametrize("h", range(5))
def test_regular_graphs_stay_monochromatic(h):
    assert len(tree_coloring(C6, h).alphabet) == 1
    assert len(tree_coloring(TWO_TRIANGLES, h).alphabet) == 1
    assert tree_coloring(C6, h).colors[0] == tree_coloring(TWO_TRIANGLES, h).colors[0]


def test_special_colorings():
    assert len(special_coloring(P3, "trivial").alphabet) == 1
    assert len(special_coloring(Graph(4, ()), "identity").alphabet) == 4
    assert special_coloring(K3, "degree").colors == ("2", "2", "2")
    with pytest.raises(ValueError):
        special_coloring(K3, "rainbow")


@given(graphs())
def test_degree_coloring_matches_height_one(g):
    assert special_coloring(g, "degree").partition() == tree_coloring(g, 1).partition()


@given(graphs(), st.integers(0, 3))
def test_combined_without_features_matches_tree(g, h):
    assert combined_coloring(g, h).partition() == tree_coloring(g, h).partition()


def test_combined_with_features():
    g = Graph(4, ((0, 1), (1, 2), (2, 3)), ("x", "y", "x", "x"))
    assert combined_coloring(g, 0).partition() == frozenset({frozenset({0, 2, 3}), frozenset({1})})
    assert len(combined_coloring(g, None).alphabet) == 4
    c = combined_coloring(g, 1)
    assert [c.feature(col) for col in c.colors] == ["x", "y", "x", "x"]


@given(graphs(), st.integers(0, 3))
def test_refinement_nests(g, h):
    coarse, fine = tree_coloring(g, h).colors, tree_coloring(g, h + 1).colors
    for u, v in itertools.combinations(range(g.n), 2):
        if fine[u] == fine[v]:
            assert coarse[u] == coarse[v]


@given(graphs(), st.integers(0, 3), st.randoms())
def test_colors_follow_permutation(g, h, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    moved = tree_coloring(permute_graph(g, perm), h).colors
    assert [moved[perm[u]] for u in range(g.n)] == list(tree_coloring(g, h).colors)


@settings(max_examples=60)
@given(graphs(max_n=6), graphs(max_n=6), st.integers(0, 3))
def test_colors_agree_with_unfolding_across_graphs(g1, g2, h):
    c1, c2 = tree_coloring(g1, h).colors, tree_coloring(g2, h).colors
    for u in range(g1.n):
        for v in range(g2.n):
            assert (c1[u] == c2[v]) == (unfold(g1, u, h) == unfold(g2, v, h))


@given(graphs(), st.integers(0, 4))
def test_stabilization(g, h):
    if tree_coloring(g, h + 1).partition() == tree_coloring(g, h).partition():
        for extra in range(2, 4):
            assert tree_coloring(g, h + extra).partition() == tree_coloring(g, h).partition()


def test_long_colors_are_compressed_and_ordered():
    path = Graph(12, tuple((i, i + 1) for i in range(11)))
    c = tree_coloring(path, 6)
    assert all(len(col) <= 64 or col.startswith("#") for col in c.colors)
    assert list(c.alphabet) == sorted(set(c.colors))


@given(graphs(min_n=1), st.integers(0, 2))
def test_partition_matrices(g, h):
    c = tree_coloring(g, h)
    mats = [partition_matrix(g, c, a) for a in c.alphabet]
    assert (sum(mats) == np.eye(g.n, dtype=int)).all()
    for a, b in itertools.product(range(len(mats)), repeat=2):
        prod = mats[a].dot(mats[b])
        assert (prod == (mats[a] if a == b else 0)).all()


def test_partition_matrix_unknown_color():
    with pytest.raises(KeyError):
        partition_matrix(K3, special_coloring(K3, "trivial"), "7")


@pytest.mark.parametrize("spec", ["trivial", "identity", "degree", "tree:2", "combined:1", "combined:identity"])
def test_parse_coloring_specs(spec):
    assert len(parse_coloring(spec)(P3).colors) == 3


@pytest.mark.parametrize("spec", ["tree", "tree:-1", "combined:x", "wl:2"])
def test_parse_coloring_rejects(spec):
    with pytest.raises(ValueError):
        parse_coloring(spec)
