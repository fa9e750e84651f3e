"""Colored walks and their incidence columns, plus an automaton view and
an enumeration oracle.

A word is a tuple of color strings; the empty tuple is the empty word.
Walk length counts vertices, so a word of length ``t`` is realized by walks
visiting ``t`` vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .coloring import ColorAssignment
from .graph import Graph

Word = tuple
EdgeSymbol = tuple  # (a, b): a transition between colors a and b
Symbol = Union[str, EdgeSymbol]

SEP = "·"


def format_word(word: Word) -> str:
    return SEP.join(word) if word else "λ"


@dataclass(frozen=True)
class WalkColumn:
    word: Word
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class WalkRefinement:
    t: int
    multiset: dict

    def __eq__(self, other):
        return isinstance(other, WalkRefinement) and self.t == other.t and self.multiset == other.multiset

    def __hash__(self):
        return hash((self.t, tuple(sorted(self.multiset.items()))))


def extend_column(adj, colors, col, a: str) -> list[int]:
    """Column of ``w·a`` from the column of a non-empty ``w``: ``P_a A col``."""
    return [sum(col[v] for v in adj[u]) if colors[u] == a else 0 for u in range(len(colors))]


def first_column(colors, a: str) -> list[int]:
    return [1 if c == a else 0 for c in colors]


def walk_columns(g: Graph, c: ColorAssignment, words: Sequence[Word]) -> list[WalkColumn]:
    """Walk-incidence columns ``W_t[-, w]`` for the given words, exactly."""
    alphabet = set(c.alphabet)
    adj = g.neighbors()
    cache: dict[Word, list[int]] = {(): [1] * g.n}

    def column(word):
        if word in cache:
            return cache[word]
        prefix, a = word[:-1], word[-1]
        if a not in alphabet:
            raise KeyError(f"symbol {a!r} not in alphabet")
        if prefix:
            col = extend_column(adj, c.colors, column(prefix), a)
        else:
            col = first_column(c.colors, a)
        cache[word] = col
        return col

    return [WalkColumn(tuple(w), tuple(column(tuple(w)))) for w in words]


def realized_columns(g: Graph, c: ColorAssignment, t: int) -> dict[Word, list[int]]:
    """All nonzero columns of ``W_t``, found by forward expansion from λ."""
    if t < 0:
        raise ValueError("t must be non-negative")
    level = {(): [1] * g.n}
    if t == 0:
        return level
    adj = g.neighbors()
    level = {(a,): first_column(c.colors, a) for a in c.alphabet}
    for _ in range(t - 1):
        nxt = {}
        for word, col in level.items():
            reach = {c.colors[u] for v, x in enumerate(col) if x for u in adj[v]}
            for a in sorted(reach):
                nxt[word + (a,)] = extend_column(adj, c.colors, col, a)
        level = nxt
    return {w: col for w, col in level.items() if any(col)}


def walk_refinement(g: Graph, c: ColorAssignment, t: int) -> WalkRefinement:
    cols = realized_columns(g, c, t)
    return WalkRefinement(t, {w: sum(col) for w, col in sorted(cols.items())})


_ORACLE_MAX_LEN = 8
_ORACLE_MAX_N = 12


def enumerate_walks_oracle(g: Graph, c: ColorAssignment, word: Word) -> int:
    """Count occurrences of ``word`` by listing vertex sequences one by one."""
    word = tuple(word)
    if len(word) > _ORACLE_MAX_LEN or g.n > _ORACLE_MAX_N:
        raise ValueError("oracle guard exceeded (|word| <= 8, n <= 12)")
    if not word:
        return g.n
    edges = set(g.edges) | {(v, u) for u, v in g.edges}
    count = 0
    stack = [(u,) for u in range(g.n) if c.colors[u] == word[0]]
    while stack:
        seq = stack.pop()
        if len(seq) == len(word):
            count += 1
            continue
        want = word[len(seq)]
        for u in range(g.n):
            if c.colors[u] == want and (seq[-1], u) in edges:
                stack.append(seq + (u,))
    return count


class GraphAutomaton:
    """Weighted automaton with states = vertices, unit boundary vectors,
    ``M(a) = P_a`` and ``M((a, b)) = P_a A P_b``."""

    def __init__(self, g: Graph, c: ColorAssignment):
        self.n = g.n
        self.colors = c.colors
        self.adjacency = g.adjacency(dtype=object)
        self.alphabet = set(c.alphabet) | {
            (c.colors[u], c.colors[v]) for u, v in g.edges
        } | {(c.colors[v], c.colors[u]) for u, v in g.edges}
        self._cache: dict = {}

    def _projection(self, a: str) -> np.ndarray:
        return np.array([1 if col == a else 0 for col in self.colors], dtype=object)

    def transition(self, symbol: Symbol) -> np.ndarray:
        if symbol in self._cache:
            return self._cache[symbol]
        if isinstance(symbol, str):
            m = np.diag(self._projection(symbol)).astype(object)
        else:
            a, b = symbol
            pa, pb = self._projection(a), self._projection(b)
            m = (pa[:, None] * self.adjacency) * pb[None, :]
        self._cache[symbol] = m
        return m

    def weight(self, symbols: Sequence[Symbol]) -> int:
        """Semantics ``1ᵀ M(w) 1``; unknown symbols raise ``KeyError``."""
        vec = np.ones(self.n, dtype=object)
        for s in reversed(list(symbols)):
            s = s if isinstance(s, str) else tuple(s)
            if s not in self.alphabet and not self._in_color_space(s):
                raise KeyError(f"symbol {s!r} not in automaton alphabet")
            vec = self.transition(s).dot(vec)
        return int(sum(vec))

    def _in_color_space(self, s) -> bool:
        # unrealized color pairs are legal symbols with an all-zero matrix
        colors = set(self.colors)
        if isinstance(s, str):
            return s in colors
        return len(s) == 2 and s[0] in colors and s[1] in colors


def edge_symbols(word: Word) -> list[Symbol]:
    """``w1 w2 … wt`` → ``(w1, w2), (w2, w3), …``; a one-letter word stays a vertex symbol."""
    word = tuple(word)
    if len(word) == 1:
        return [word[0]]
    return [(word[i], word[i + 1]) for i in range(len(word) - 1)]


def automaton_semantics(g: Graph, c: ColorAssignment, symbols: Sequence[Symbol]) -> int:
    return GraphAutomaton(g, c).weight(symbols)
