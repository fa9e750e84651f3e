"""Caterpillar homomorphism counts and a search for graphs that paths cannot separate."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coloring import special_coloring, tree_coloring
from .graph import Graph, _norm_edge
from .walks import walk_refinement

# A rooted tree is a tuple of its children's subtrees; () is a lone root.
RootedTree = tuple


def tree_depth(tree: RootedTree) -> int:
    return 0 if not tree else 1 + max(tree_depth(ch) for ch in tree)


def tree_size(tree: RootedTree) -> int:
    return 1 + sum(tree_size(ch) for ch in tree)


def star(k: int) -> RootedTree:
    return ((),) * k


@dataclass(frozen=True)
class CaterpillarShape:
    h: int
    legs: tuple

    def __post_init__(self):
        for leg in self.legs:
            if tree_depth(leg) > self.h:
                raise ValueError(f"leg of depth {tree_depth(leg)} exceeds h={self.h}")

    @classmethod
    def from_leg_sizes(cls, sizes: Sequence[int]) -> "CaterpillarShape":
        return cls(1, tuple(star(int(k)) for k in sizes))

    @classmethod
    def path(cls, t: int) -> "CaterpillarShape":
        return cls(0, ((),) * t)

    @property
    def spine_len(self) -> int:
        return len(self.legs)

    @property
    def leg_sizes(self) -> tuple[int, ...]:
        return tuple(len(leg) for leg in self.legs)


def build_caterpillar(shape: CaterpillarShape) -> Graph:
    """Spine on vertices ``0..t'-1`` in order, leg vertices numbered after."""
    t = shape.spine_len
    edges = [(i, i + 1) for i in range(t - 1)]
    nxt = t
    for i, leg in enumerate(shape.legs):
        stack = [(i, ch) for ch in leg]
        while stack:
            parent, sub = stack.pop(0)
            me = nxt
            nxt += 1
            edges.append((parent, me))
            stack.extend((me, ch) for ch in sub)
    return Graph(nxt, tuple(edges))


def _rooted_counts(tree: RootedTree, adj, n) -> list[int]:
    """``out[u]`` = homomorphisms of the rooted tree sending its root to ``u``."""
    out = [1] * n
    for ch in tree:
        sub = _rooted_counts(ch, adj, n)
        out = [out[u] * sum(sub[v] for v in adj[u]) for u in range(n)]
    return out


def rooted_hom_counts(tree: RootedTree, g: Graph) -> list[int]:
    return _rooted_counts(tree, g.neighbors(), g.n)


def hom_count_tree_dp(tree: Graph, g: Graph) -> int:
    """Homomorphisms from a tree into ``g`` by a rooted dynamic program."""
    if not tree.is_tree():
        raise ValueError("pattern is not a tree")
    adj_f = tree.neighbors()
    adj_g = g.neighbors()
    parent = [-1] * tree.n
    order = [0]
    seen = {0}
    for u in order:
        for v in adj_f[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                order.append(v)
    table: list[list[int] | None] = [None] * tree.n
    for u in reversed(order):
        vec = [1] * g.n
        for ch in adj_f[u]:
            if ch == parent[u]:
                continue
            sub = table[ch]
            vec = [vec[x] * sum(sub[y] for y in adj_g[x]) for x in range(g.n)]
        table[u] = vec
    return sum(table[0])


def hom_count_bruteforce(f: Graph, g: Graph) -> int:
    if f.n > 6 or g.n > 6:
        raise ValueError("brute-force guard exceeded (both graphs need <= 6 vertices)")
    g_edges = set(g.edges)
    count = 0
    for phi in itertools.product(range(g.n), repeat=f.n):
        if all(_norm_edge(phi[u], phi[v]) in g_edges and phi[u] != phi[v] for u, v in f.edges):
            count += 1
    return count


def hom_c1_formula(g: Graph, leg_sizes: Sequence[int]) -> int:
    """Homomorphisms of a star-legged caterpillar from degree-colored walk counts.

    Each occurrence of a degree word ``w`` carries the spine, and leaf ``j``
    of leg ``i`` has ``w[i]`` choices, giving ``Σ_w wr(w) Π_i w[i]^{s_i}``.
    """
    t = len(leg_sizes)
    if t == 0:
        raise ValueError("need at least one spine vertex")
    wr = walk_refinement(g, special_coloring(g, "degree"), t)
    total = 0
    for word, count in wr.multiset.items():
        term = count
        for sym, s in zip(word, leg_sizes):
            term *= int(sym) ** s
        total += term
    return total


def hom_caterpillar_formula(g: Graph, shape: CaterpillarShape) -> int:
    """General ``(h, t)`` version: rooted leg counts are constant on color
    classes of the height-``h`` refinement, so they factor through the words."""
    c = tree_coloring(g, shape.h)
    weight = []
    for leg in shape.legs:
        counts = rooted_hom_counts(leg, g)
        per_color: dict[str, int] = {}
        for u, col in enumerate(c.colors):
            if per_color.setdefault(col, counts[u]) != counts[u]:
                raise AssertionError("leg count not determined by refinement color")
        weight.append(per_color)
    wr = walk_refinement(g, c, shape.spine_len)
    total = 0
    for word, count in wr.multiset.items():
        term = count
        for i, sym in enumerate(word):
            term *= weight[i][sym]
        total += term
    return total


def closed_walk_profile(g: Graph) -> tuple[int, ...]:
    """``1ᵀA^k1`` for ``k = 0..n-1`` as exact integers."""
    adj = g.neighbors()
    vec = [1] * g.n
    out = []
    for _ in range(g.n):
        out.append(sum(vec))
        vec = [sum(vec[v] for v in adj[u]) for u in range(g.n)]
    return tuple(out)


def _fast_profile(a: np.ndarray) -> tuple[int, ...]:
    vec = np.ones(a.shape[0], dtype=np.int64)
    out = []
    for _ in range(a.shape[0]):
        out.append(int(vec.sum()))
        vec = a @ vec
    return tuple(out)


def find_c1_witness(g: Graph, h: Graph, t: int = 4, max_entry: int = 8):
    """Smallest leg-size vector (by total, then lexicographic) whose star-legged
    caterpillar counts differ between ``g`` and ``h``."""
    cands = sorted(itertools.product(range(max_entry + 1), repeat=t), key=lambda s: (sum(s), s))
    for s in cands:
        a, b = hom_c1_formula(g, s), hom_c1_formula(h, s)
        if a != b:
            return list(s), a, b
    return None


def separation_certificate(g: Graph, h: Graph, t: int = 4) -> dict | None:
    """Certificate that ``g`` and ``h`` agree on all path homomorphism counts
    but differ on degree-colored walks of length ``t``; ``None`` otherwise."""
    if g.n != h.n:
        return None
    pg, ph = closed_walk_profile(g), closed_walk_profile(h)
    if pg != ph:
        return None
    wg = walk_refinement(g, special_coloring(g, "degree"), t).multiset
    wh = walk_refinement(h, special_coloring(h, "degree"), t).multiset
    if wg == wh:
        return None
    diff = min(w for w in set(wg) | set(wh) if wg.get(w, 0) != wh.get(w, 0))
    cert = {
        "profile": list(pg),
        "t": t,
        "word": list(diff),
        "count_G": wg.get(diff, 0),
        "count_H": wh.get(diff, 0),
    }
    witness = find_c1_witness(g, h, t)
    if witness is not None:
        cert["caterpillar_leg_sizes"] = witness[0]
        cert["hom_G"] = witness[1]
        cert["hom_H"] = witness[2]
    return cert


def _random_connected(n: int, rng) -> Graph:
    while True:
        p = float(rng.uniform(0.25, 0.5))
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(len(iu)) < p
        g = Graph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))
        if g.is_connected():
            return g


@dataclass
class SeparationResult:
    G: Graph | None
    H: Graph | None
    certificate: dict | None
    candidates: int

    @property
    def found(self) -> bool:
        return self.G is not None


def find_separating_pair(n: int, seed: int, budget: int, walk_len: int = 400) -> SeparationResult:
    """Random connected hosts explored by degree-preserving 2-switches.

    Every visited graph is bucketed by its closed-walk profile; a bucket hit
    whose degree-colored length-4 walks differ is a separating pair.  Each
    visited switch counts as one candidate against ``budget``.
    """
    if n < 6:
        raise ValueError("need n >= 6")
    rng = np.random.default_rng(seed)
    used = 0
    while used < budget:
        host = _random_connected(n, rng)
        buckets: dict[tuple, list[Graph]] = {_fast_profile(host.adjacency()): [host]}
        seen = {host.edges}
        cur = host
        for _ in range(walk_len):
            if used >= budget:
                break
            edges = list(cur.edges)
            if len(edges) < 2:
                break
            i, j = rng.choice(len(edges), size=2, replace=False)
            (a, b), (c, d) = edges[i], edges[j]
            if len({a, b, c, d}) < 4:
                continue
            add = [(a, c), (b, d)] if rng.random() < 0.5 else [(a, d), (b, c)]
            present = set(edges)
            if any(_norm_edge(*e) in present for e in add):
                continue
            used += 1
            present -= {edges[i], edges[j]}
            present |= {_norm_edge(*e) for e in add}
            nxt = Graph(n, tuple(present))
            if not nxt.is_connected():
                continue
            cur = nxt
            if cur.edges in seen:
                continue
            seen.add(cur.edges)
            prof = _fast_profile(cur.adjacency())
            for other in buckets.get(prof, []):
                cert = separation_certificate(other, cur)
                if cert is not None:
                    return SeparationResult(other, cur, cert, used)
            buckets.setdefault(prof, []).append(cur)
    return SeparationResult(None, None, None, used)
