"""Independent brute-force references used by the verification suite."""

from __future__ import annotations

import itertools

import numpy as np
import sympy

from .coloring import ColorAssignment
from .graph import Graph


def brute_force_column(g: Graph, c: ColorAssignment, word) -> list[int]:
    """``W_t[-, w]`` by listing every vertex sequence in ``V^t``."""
    word = tuple(word)
    if not word:
        return [1] * g.n
    edges = set(g.edges) | {(v, u) for u, v in g.edges}
    col = [0] * g.n
    for seq in itertools.product(range(g.n), repeat=len(word)):
        if all(c.colors[u] == a for u, a in zip(seq, word)) and all(
            (seq[i], seq[i + 1]) in edges for i in range(len(seq) - 1)
        ):
            col[seq[-1]] += 1
    return col


def sympy_rank(cols) -> int:
    if not cols:
        return 0
    return sympy.Matrix([list(c) for c in cols]).rank()


def reference_canonical_words(g: Graph, c: ColorAssignment, T: int) -> list[list[tuple]]:
    """Greedy scan of all of Σ^t in lexicographic order, keeping a word iff
    its prefix was kept and its column raises the rank."""
    levels = [[()]]
    for t in range(1, T + 1):
        kept, cols = [], []
        prev = set(levels[-1])
        for word in itertools.product(c.alphabet, repeat=t):
            if word[:-1] not in prev:
                continue
            col = brute_force_column(g, c, word)
            if sympy_rank(cols + [col]) > len(cols):
                kept.append(word)
                cols.append(col)
        levels.append(kept)
    return levels


def full_walk_rank(g: Graph, c: ColorAssignment, t: int) -> int:
    cols = [brute_force_column(g, c, w) for w in itertools.product(c.alphabet, repeat=t)]
    return sympy_rank([col for col in cols if any(col)])


def unfold(g: Graph, u: int, h: int):
    """Depth-``h`` neighborhood unfolding of ``u`` as a canonical nested tuple."""
    if h == 0:
        return ()
    adj = g.neighbors()
    return (unfold(g, u, h - 1), tuple(sorted(unfold(g, v, h - 1) for v in adj[u])))


def ones_power_sums(g: Graph, kmax: int) -> list[int]:
    a = g.adjacency(dtype=object)
    vec = np.ones(g.n, dtype=object)
    out = []
    for _ in range(kmax + 1):
        out.append(int(sum(vec)))
        vec = a.dot(vec)
    return out


def hom_count_enumerate(f: Graph, g: Graph, max_maps: int = 3_000_000, chunk: int = 1 << 20) -> int:
    """Count homomorphisms by testing every map ``V(f) -> V(g)``, vectorized
    over blocks of maps encoded as base-``n`` integers."""
    total_maps = g.n ** f.n
    if total_maps > max_maps:
        raise ValueError(f"{total_maps} maps exceed the enumeration budget")
    if f.n == 0:
        return 1
    a = g.adjacency(dtype=bool)
    count = 0
    for start in range(0, total_maps, chunk):
        codes = np.arange(start, min(start + chunk, total_maps), dtype=np.int64)
        phi = np.empty((f.n, len(codes)), dtype=np.int64)
        for u in range(f.n):
            phi[u] = codes % g.n
            codes = codes // g.n
        ok = np.ones(phi.shape[1], dtype=bool)
        for u, v in f.edges:
            ok &= a[phi[u], phi[v]]
        count += int(ok.sum())
    return count
