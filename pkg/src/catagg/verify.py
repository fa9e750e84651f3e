"""Randomized invariant checks behind ``catagg verify``."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import oracles
from .aggregation import (
    canonical_search,
    efficient_matrix,
    efficient_stack,
    invariant_stack,
    left_inverse,
)
from .catgnn import ModelConfig, batch_loss, forward, gcn_reference_forward, gradients, init_params, precompute_layers
from .coloring import special_coloring, tree_coloring
from .graph import Graph, permute_graph, random_graph
from .homcount import (
    CaterpillarShape,
    build_caterpillar,
    hom_c1_formula,
    hom_count_bruteforce,
    hom_count_tree_dp,
)
from .walks import GraphAutomaton, edge_symbols, enumerate_walks_oracle, realized_columns


def _graphs(rng, count, nmin, nmax, p=0.4, min_degree=0):
    out = []
    while len(out) < count:
        n = int(rng.integers(nmin, nmax + 1))
        g = random_graph(n, p, int(rng.integers(2**31)))
        if min(g.degrees(), default=0) >= min_degree:
            out.append(g)
    return out


def check_walks(rng):
    ok_oracle = ok_auto = True
    for g in _graphs(rng, 15, 3, 7):
        c = tree_coloring(g, int(rng.integers(0, 3)))
        auto = GraphAutomaton(g, c)
        for t in range(0, 5):
            for w, col in realized_columns(g, c, t).items():
                ok_oracle &= enumerate_walks_oracle(g, c, w) == sum(col)
                if t:
                    ok_auto &= auto.weight(edge_symbols(w)) == sum(col)
    return [("walk columns = enumeration oracle", ok_oracle), ("automaton semantics = column sums", ok_auto)]


def check_basis(rng):
    ok_ref = ok_inv = True
    for g in _graphs(rng, 10, 2, 5):
        c = tree_coloring(g, int(rng.integers(0, 3)))
        if len(c.alphabet) > 3:
            continue
        basis = canonical_search(g, c, 3)
        ok_ref &= [list(s) for s in basis.words] == oracles.reference_canonical_words(g, c, 3)
        for t in range(4):
            if basis.words[t]:
                prod = left_inverse(basis, t).dot(basis.matrix(t))
                ok_inv &= (prod == np.eye(len(basis.words[t]), dtype=int)).all()
    return [("canonical search = greedy reference", ok_ref), ("left inverse exact", bool(ok_inv))]


def check_special(rng):
    ok_id = ok_triv = True
    for g in _graphs(rng, 8, 2, 8, min_degree=1):
        basis = canonical_search(g, special_coloring(g, "identity"), 3)
        a = g.adjacency(dtype=object)
        eye = np.eye(g.n, dtype=int).astype(object)
        for t in range(1, 3):
            perm = [int(w[-1]) for w in basis.words[t]]
            perm2 = [int(w[-1]) for w in basis.words[t + 1]]
            ok_id &= (efficient_matrix(basis, t, a) == a[np.ix_(perm, perm2)]).all()
            ok_id &= (efficient_matrix(basis, t, eye) == eye[np.ix_(perm, perm2)]).all()
        ok_id &= all(x == Fraction(1, g.n) for x in efficient_matrix(basis, 0, eye).ravel())
        stack = efficient_stack(g, special_coloring(g, "trivial"), 4)
        s = oracles.ones_power_sums(g, 10)
        for t in range(1, 4):
            ok_triv &= stack.CI[t][0, 0] == Fraction(s[2 * t - 1], s[2 * t - 2])
            ok_triv &= stack.CA[t][0, 0] == Fraction(s[2 * t], s[2 * t - 2])
    return [("identity coloring recovers I and A", bool(ok_id)), ("trivial coloring walk-ratio closed form", bool(ok_triv))]


def check_homcount(rng):
    ok_dp = ok_formula = True
    for g in _graphs(rng, 8, 2, 6):
        for sizes in itertools.product(range(2), repeat=2):
            f = build_caterpillar(CaterpillarShape.from_leg_sizes(sizes))
            dp = hom_count_tree_dp(f, g)
            ok_formula &= dp == hom_c1_formula(g, sizes)
            if f.n <= 6:
                ok_dp &= dp == hom_count_bruteforce(f, g)
    return [("tree DP = brute force", ok_dp), ("leg-size formula = tree DP", ok_formula)]


def check_invariance(rng):
    ok = True
    for g in _graphs(rng, 6, 2, 7):
        perm = rng.permutation(g.n).tolist()
        h = int(rng.integers(0, 3))
        ok &= (
            invariant_stack(g, tree_coloring(g, h)).serialize()
            == invariant_stack(permute_graph(g, perm), tree_coloring(permute_graph(g, perm), h)).serialize()
        )
    return [("invariant is isomorphism invariant", ok)]


def check_gnn(rng):
    ok_gcn = True
    for g in _graphs(rng, 5, 3, 8, min_degree=1):
        g = Graph(g.n, g.edges, tuple(str(int(x)) for x in rng.integers(0, 3, g.n)))
        cfg = ModelConfig(layers=3, width=4, coloring="combined:identity", combine="none")
        p = init_params(cfg, ["0", "1", "2"], seed=int(rng.integers(1000)))
        ok_gcn &= np.max(np.abs(forward(p, precompute_layers(g, cfg), cfg) - gcn_reference_forward(g, p, cfg))) <= 1e-9
    graphs = _graphs(rng, 4, 3, 7)
    cfg = ModelConfig(layers=2, width=3, coloring="combined:1", loss="mse")
    layers = [precompute_layers(g, cfg) for g in graphs]
    p = init_params(cfg, ["_"], seed=1)
    y = rng.normal(size=len(graphs))
    grads = gradients(p, layers, y, cfg)
    worst = 0.0
    for name, tensor in p.tensors.items():
        num = np.zeros_like(tensor)
        for i in np.ndindex(tensor.shape):
            old = tensor[i]
            tensor[i] = old + 1e-6
            lp = batch_loss(p, layers, y, cfg)
            tensor[i] = old - 1e-6
            lm = batch_loss(p, layers, y, cfg)
            tensor[i] = old
            num[i] = (lp - lm) / 2e-6
        denom = np.linalg.norm(num) + np.linalg.norm(grads[name])
        if denom > 0:
            worst = max(worst, np.linalg.norm(num - grads[name]) / denom)
    return [("identity mode = dense GCN", bool(ok_gcn)), ("gradients = finite differences", worst < 1e-4)]


SUITES = {
    "walks": check_walks,
    "basis": check_basis,
    "special": check_special,
    "homcount": check_homcount,
    "invariance": check_invariance,
    "gnn": check_gnn,
}


def run(suite: str = "all", seed: int = 0) -> list[tuple[str, str, bool]]:
    names = list(SUITES) if suite == "all" else [suite]
    rows = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        rng = np.random.default_rng(seed)
        for check, ok in SUITES[name](rng):
            rows.append((name, check, bool(ok)))
    return rows
