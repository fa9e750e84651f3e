import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catagg.aggregation import (
    EfficientStack,
    augmented_normalized_adjacency,
    canonical_search,
    efficient_matrix,
    efficient_stack,
    invariant_stack,
    left_inverse,
    node_stats,
)
from catagg.coloring import special_coloring, tree_coloring
from catagg.exact import EchelonBasis, fraction_str, parse_fraction, rank, solve
from catagg.graph import Graph, load_graph_collection, permute_graph
from catagg.oracles import reference_canonical_words, sympy_rank
from conftest import K3, P3, graphs

PAIR = Path(__file__).parent / "fixtures" / "separating_pair"


def F(*rows):
    return np.array([[Fraction(x) for x in row] for row in rows], dtype=object)


# ---------------------------------------------------------------- exact


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=6))
def test_echelon_rank_matches_sympy(vectors):
    basis = EchelonBasis()
    for v in vectors:
        basis.add(v)
    assert len(basis) == sympy_rank(vectors)
    assert rank(vectors) == sympy_rank(vectors)


def test_solve_and_fraction_strings():
    x = solve([[2, 1], [1, 3]], [[1], [2]])
    assert x[0, 0] == Fraction(1, 5) and x[1, 0] == Fraction(3, 5)
    assert fraction_str(Fraction(3)) == "3/1"
    assert parse_fraction("-4/6") == Fraction(-2, 3)


# ------------------------------------------------------------- search


def test_trivial_connected_has_one_word_per_level():
    g = Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (1, 4)))
    assert canonical_search(g, special_coloring(g, "trivial"), 6).sizes() == [1] * 7


def test_identity_sizes():
    g = Graph(4, ((0, 1), (1, 2), (2, 3)))
    assert canonical_search(g, special_coloring(g, "identity"), 4).sizes() == [1, 4, 4, 4, 4]


def test_p3_degree_words():
    basis = canonical_search(P3, special_coloring(P3, "degree"), 2)
    assert basis.words[1] == (("1",), ("2",))
    assert basis.words[2] == (("1", "2"), ("2", "1"))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.integers(0, 2), st.integers(0, 4))
def test_search_matches_greedy_reference(g, h, T):
    c = tree_coloring(g, h)
    if len(c.alphabet) > 3:
        T = min(T, 2)
    basis = canonical_search(g, c, T)
    assert [list(s) for s in basis.words] == reference_canonical_words(g, c, T)


@given(graphs(max_n=7), st.integers(0, 3), st.integers(1, 5))
def test_search_invariants(g, h, T):
    basis = canonical_search(g, tree_coloring(g, h), T)
    for t in range(1, T + 1):
        assert len(basis.words[t]) <= g.n
        prev = set(basis.words[t - 1])
        assert all(w[:-1] in prev for w in basis.words[t])
        assert list(basis.words[t]) == sorted(basis.words[t])
        assert sympy_rank(list(basis.columns[t])) == len(basis.words[t])


def test_empty_graph_has_empty_levels():
    g = Graph(3, ())
    basis = canonical_search(g, special_coloring(g, "trivial"), 3)
    assert basis.sizes() == [1, 1, 0, 0]
    m = efficient_matrix(basis, 1, g.adjacency(dtype=object))
    assert m.shape == (1, 0)


# ----------------------------------------------------------- matrices


def test_k3_trivial_entries():
    s = efficient_stack(K3, special_coloring(K3, "trivial"), 4)
    assert s.CI[0][0, 0] == 1 and s.CA[0][0, 0] == 2
    for t in range(1, 4):
        assert s.CI[t][0, 0] == 2 and s.CA[t][0, 0] == 4


def test_p3_degree_level_one():
    s = efficient_stack(P3, special_coloring(P3, "degree"), 2)
    assert (s.CI[1] == F([0, 1], [2, 0])).all()
    assert (s.CA[1] == F([2, 0], [0, 2])).all()


@given(graphs(min_n=2, max_n=7, min_degree=1))
def test_identity_recovers_matrices(g):
    basis = canonical_search(g, special_coloring(g, "identity"), 3)
    a = g.adjacency(dtype=object)
    eye = np.eye(g.n, dtype=int).astype(object)
    for t in (1, 2):
        rows = [int(w[-1]) for w in basis.words[t]]
        cols = [int(w[-1]) for w in basis.words[t + 1]]
        assert (efficient_matrix(basis, t, a) == a[np.ix_(rows, cols)]).all()
        assert (efficient_matrix(basis, t, eye) == eye[np.ix_(rows, cols)]).all()
    assert all(x == Fraction(1, g.n) for x in efficient_matrix(basis, 0, eye).ravel())


@given(graphs(max_n=7), st.integers(0, 2), st.integers(1, 4))
def test_left_inverse_is_exact(g, h, T):
    basis = canonical_search(g, tree_coloring(g, h), T)
    for t in range(T + 1):
        k = len(basis.words[t])
        if k:
            assert (left_inverse(basis, t).dot(basis.matrix(t)) == np.eye(k, dtype=int)).all()


@given(graphs(max_n=7), st.integers(0, 2))
def test_float_path_matches_exact(g, h):
    basis = canonical_search(g, tree_coloring(g, h), 3)
    a = g.adjacency(dtype=object)
    for t in range(3):
        exact = efficient_matrix(basis, t, a).astype(float)
        approx = efficient_matrix(basis, t, g.adjacency(dtype=float), exact=False)
        assert np.allclose(exact, approx, atol=1e-9)


def test_efficient_matrix_argument_checks():
    basis = canonical_search(P3, special_coloring(P3, "degree"), 2)
    with pytest.raises(ValueError):
        efficient_matrix(basis, 2, np.eye(3))
    with pytest.raises(ValueError):
        efficient_matrix(basis, 0, np.eye(4))


# ---------------------------------------------------------- invariant


def test_k3_invariant_self_equal():
    c = special_coloring(K3, "degree")
    assert invariant_stack(K3, c).serialize() == invariant_stack(K3, c).serialize()


@given(graphs(max_n=7), st.integers(0, 2), st.randoms())
def test_invariant_ignores_vertex_order(g, h, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    pg = permute_graph(g, perm)
    assert invariant_stack(g, tree_coloring(g, h)).serialize() == invariant_stack(pg, tree_coloring(pg, h)).serialize()


@given(graphs(max_n=6), st.integers(0, 2))
def test_stack_json_round_trip(g, h):
    s = invariant_stack(g, tree_coloring(g, h))
    back = EfficientStack.from_json(json.loads(s.serialize()))
    assert back.serialize() == s.serialize()
    for x, y in zip(back.CA + back.CI, s.CA + s.CI):
        assert x.shape == y.shape and (x == y).all()


def test_separating_pair_has_different_invariants():
    g = load_graph_collection(PAIR / "G.json").graphs[0]
    h = load_graph_collection(PAIR / "H.json").graphs[0]
    sg = invariant_stack(g, special_coloring(g, "degree")).serialize()
    sh = invariant_stack(h, special_coloring(h, "degree")).serialize()
    assert sg != sh


# --------------------------------------------------------- normalized


def test_augmented_adjacency_examples():
    at = augmented_normalized_adjacency(K3)
    assert np.allclose(np.diag(at), 0.5) and np.isclose(at[0, 1], 0.25)
    assert np.allclose(augmented_normalized_adjacency(Graph(4, ())), np.eye(4))
    c6 = Graph(6, tuple((i, (i + 1) % 6) for i in range(6)))
    assert np.allclose(augmented_normalized_adjacency(c6).sum(axis=1), 1.0)


# --------------------------------------------------------------- stats


def test_node_stats_examples():
    g = Graph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)))
    st_triv = node_stats(canonical_search(g, special_coloring(g, "trivial"), 5), 5)
    assert st_triv.widths == (1,) * 5
    st_id = node_stats(canonical_search(g, special_coloring(g, "identity"), 5), 5)
    assert st_id.widths == (6,) * 5 and st_id.saved == 0.0
    st_p3 = node_stats(canonical_search(P3, special_coloring(P3, "degree"), 2), 2)
    assert st_p3.widths == (2, 2) and st_p3.total == 5 and st_p3.baseline == 7
