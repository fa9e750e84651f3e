import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catagg.coloring import ColorAssignment, special_coloring, tree_coloring
from catagg.graph import Graph
from catagg.oracles import brute_force_column
from catagg.walks import (
    GraphAutomaton,
    edge_symbols,
    enumerate_walks_oracle,
    format_word,
    realized_columns,
    walk_columns,
    walk_refinement,
)
from conftest import K3, P3, graphs


def deg(g):
    return special_coloring(g, "degree")


def triv(g):
    return special_coloring(g, "trivial")


# Green vertices 1 and 2 hang off blue vertex 3, which meets red vertex 4,
# so g·b·r·b is realized by exactly two walks.
RGB = Graph(5, ((0, 1), (1, 3), (2, 3), (3, 4)))
RGB_COLORS = ColorAssignment(("r", "g", "g", "b", "r"), ("b", "g", "r"), "custom")


@given(graphs())
def test_empty_word_is_all_ones(g):
    assert walk_columns(g, deg(g), [()])[0].counts == (1,) * g.n


def test_p3_two_letter_columns():
    a, b = walk_columns(P3, deg(P3), [("1", "2"), ("2", "1")])
    assert a.counts == (0, 2, 0)
    assert b.counts == (1, 0, 1)


def test_three_color_walk_occurs_twice():
    (col,) = walk_columns(RGB, RGB_COLORS, [("g", "b", "r", "b")])
    assert col.total == 2
    assert enumerate_walks_oracle(RGB, RGB_COLORS, ("g", "b", "r", "b")) == 2


def test_refinement_examples():
    assert walk_refinement(K3, triv(K3), 2).multiset == {("0", "0"): 6}
    assert walk_refinement(P3, deg(P3), 2).multiset == {("1", "2"): 2, ("2", "1"): 2}
    assert walk_refinement(P3, deg(P3), 0).multiset == {(): 3}


def test_oracle_examples():
    assert enumerate_walks_oracle(P3, deg(P3), ("1", "2")) == 2
    assert enumerate_walks_oracle(K3, triv(K3), ("0", "0", "0")) == 12
    assert enumerate_walks_oracle(P3, deg(P3), ("1", "1")) == 0
    with pytest.raises(ValueError):
        enumerate_walks_oracle(Graph(13, ()), triv(Graph(13, ())), ("0",))


def test_unknown_symbol_raises():
    with pytest.raises(KeyError):
        walk_columns(P3, deg(P3), [("1", "9")])


def test_format_word():
    assert format_word(()) == "λ"
    assert format_word(("1", "2", "1")) == "1·2·1"


@settings(max_examples=50)
@given(graphs(max_n=6), st.integers(0, 2), st.integers(0, 3))
def test_columns_match_brute_force(g, h, t):
    c = tree_coloring(g, h)
    for word, col in realized_columns(g, c, t).items():
        assert col == brute_force_column(g, c, word)
        assert sum(col) == enumerate_walks_oracle(g, c, word)


@given(graphs(max_n=7), st.integers(0, 4))
def test_refinement_total_is_walk_count(g, t):
    total = sum(walk_refinement(g, triv(g), t).multiset.values())
    a = g.adjacency(dtype=object)
    vec = np.ones(g.n, dtype=object)
    for _ in range(max(t - 1, 0)):
        vec = a.dot(vec)
    assert total == (g.n if t == 0 else sum(vec))


@given(graphs(max_n=7), st.integers(0, 2), st.integers(1, 4))
def test_automaton_agrees_with_columns(g, h, t):
    c = tree_coloring(g, h)
    auto = GraphAutomaton(g, c)
    for word, col in realized_columns(g, c, t).items():
        assert auto.weight(edge_symbols(word)) == sum(col)


def test_automaton_small_cases():
    auto = GraphAutomaton(P3, deg(P3))
    assert auto.weight([]) == 3
    # blocks whose inner colors disagree have no walk
    assert auto.weight([("1", "2"), ("1", "2")]) == 0
    assert auto.weight([("1", "1")]) == 0
    with pytest.raises(KeyError):
        auto.weight(["7"])


def test_edge_symbols():
    assert edge_symbols(("a",)) == ["a"]
    assert edge_symbols(("a", "b", "c")) == [("a", "b"), ("b", "c")]
