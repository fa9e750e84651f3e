"""Canonical word bases and the reduced graph matrices built on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coloring import ColorAssignment
from .exact import EchelonBasis, fraction_str, solve
from .graph import Graph
from .walks import Word, extend_column, first_column, format_word


@dataclass(frozen=True)
class LayeredBasis:
    """Canonical words ``S_t`` and their integer walk columns, ``t = 0..T``."""

    n: int
    words: tuple[tuple[Word, ...], ...]
    columns: tuple[tuple[tuple[int, ...], ...], ...]
    colors: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.words) - 1

    def sizes(self) -> list[int]:
        return [len(s) for s in self.words]

    def effective_depth(self) -> int:
        return max(t for t, s in enumerate(self.words) if s)

    def matrix(self, t: int) -> np.ndarray:
        """``B_t`` as an ``n × |S_t|`` integer object array."""
        b = np.zeros((self.n, len(self.words[t])), dtype=object)
        b[:] = 0
        for j, col in enumerate(self.columns[t]):
            b[:, j] = col
        return b

    def blocks(self, t: int) -> list[tuple[list[int], list[int]]]:
        """(word indices, vertex indices) per last color at level ``t``.

        Columns of different last colors have disjoint supports, so ``B_t``
        is block diagonal up to row/column permutation.
        """
        if t == 0:
            return [([0], list(range(self.n)))] if self.words[0] else []
        groups: dict[str, list[int]] = {}
        for j, w in enumerate(self.words[t]):
            groups.setdefault(w[-1], []).append(j)
        out = []
        for a, idx in groups.items():
            verts = [u for u, c in enumerate(self.colors) if c == a]
            out.append((idx, verts))
        return out


def canonical_search(g: Graph, c: ColorAssignment, T: int) -> LayeredBasis:
    """Layered canonical word search.

    Candidates ``w·a`` are generated per parent in ``S_t`` order and per color
    in alphabet order, so each level is scanned in lexicographic order and the
    greedy choice is the lexicographically minimal independent set.
    """
    if T < 0:
        raise ValueError("T must be non-negative")
    adj = g.neighbors()
    classes = c.classes()
    words: list[list[Word]] = [[()]]
    columns: list[list[list[int]]] = [[[1] * g.n]]
    for t in range(T):
        bases = {a: EchelonBasis() for a in c.alphabet}
        level_words, level_cols = [], []
        for w, col in zip(words[t], columns[t]):
            for a in c.alphabet:
                verts = classes[a]
                # a full class basis spans everything that can still appear
                if len(bases[a]) == len(verts):
                    continue
                new = first_column(c.colors, a) if t == 0 else extend_column(adj, c.colors, col, a)
                if bases[a].add([new[u] for u in verts]):
                    level_words.append(w + (a,))
                    level_cols.append(new)
        words.append(level_words)
        columns.append(level_cols)
    return LayeredBasis(
        g.n,
        tuple(tuple(s) for s in words),
        tuple(tuple(tuple(col) for col in cols) for cols in columns),
        c.colors,
    )


def left_inverse(basis: LayeredBasis, t: int) -> np.ndarray:
    """Exact ``B_t⁺ = (B_tᵀB_t)⁻¹B_tᵀ`` as a Fraction object array."""
    b = basis.matrix(t)
    out = np.zeros((b.shape[1], basis.n), dtype=object)
    out[:] = Fraction(0)
    for idx, verts in basis.blocks(t):
        sub = b[np.ix_(verts, idx)]
        gram = sub.T.dot(sub)
        inv = solve(gram.tolist(), sub.T.tolist())
        out[np.ix_(idx, verts)] = inv
    return out


def efficient_matrix(basis: LayeredBasis, t: int, M, exact: bool = True) -> np.ndarray:
    """``C_t^M = B_t⁺ M B_{t+1}`` of shape ``|S_t| × |S_{t+1}|``."""
    if not 0 <= t < basis.depth:
        raise ValueError(f"level {t} needs t+1 <= T={basis.depth}")
    M = np.asarray(M, dtype=object if exact else float)
    if M.shape != (basis.n, basis.n):
        raise ValueError(f"M must be {basis.n}×{basis.n}, got {M.shape}")
    nxt = basis.matrix(t + 1)
    if exact:
        rhs = M.dot(nxt)
        out = np.zeros((len(basis.words[t]), nxt.shape[1]), dtype=object)
        out[:] = Fraction(0)
        if nxt.shape[1] == 0:
            return out
        b = basis.matrix(t)
        for idx, verts in basis.blocks(t):
            sub = b[np.ix_(verts, idx)]
            out[idx, :] = solve(sub.T.dot(sub).tolist(), sub.T.dot(rhs[verts, :]).tolist())
        return out
    rhs = M @ nxt.astype(float)
    out = np.zeros((len(basis.words[t]), nxt.shape[1]))
    if nxt.shape[1] == 0:
        return out
    b = basis.matrix(t).astype(float)
    for idx, verts in basis.blocks(t):
        sub = b[np.ix_(verts, idx)]
        scale = np.linalg.norm(sub, axis=0)
        sol = np.linalg.lstsq(sub / scale, rhs[verts, :], rcond=None)[0]
        out[idx, :] = sol / scale[:, None]
    return out


@dataclass(frozen=True)
class EfficientStack:
    words: tuple[tuple[Word, ...], ...]
    CA: tuple[np.ndarray, ...]
    CI: tuple[np.ndarray, ...]

    def node_counts(self) -> list[int]:
        return [len(s) for s in self.words]

    def to_json(self) -> dict:
        def mat(m):
            return [[fraction_str(x) for x in row] for row in m.tolist()]

        levels = []
        for t, ws in enumerate(self.words):
            level = {"words": [list(w) for w in ws]}
            if t < len(self.CA):
                level["CA"] = mat(self.CA[t])
                level["CI"] = mat(self.CI[t])
            levels.append(level)
        return {"levels": levels, "node_counts": self.node_counts()}

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, obj: dict) -> "EfficientStack":
        def mat(rows, r, c):
            out = np.zeros((r, c), dtype=object)
            out[:] = Fraction(0)
            for i, row in enumerate(rows):
                out[i, :] = [Fraction(x) for x in row]
            return out

        words = tuple(tuple(tuple(w) for w in lv["words"]) for lv in obj["levels"])
        CA, CI = [], []
        for t, lv in enumerate(obj["levels"]):
            if "CA" in lv:
                r, c = len(words[t]), len(words[t + 1])
                CA.append(mat(lv["CA"], r, c))
                CI.append(mat(lv["CI"], r, c))
        return cls(words, tuple(CA), tuple(CI))


def efficient_stack(g: Graph, c: ColorAssignment, T: int) -> EfficientStack:
    """Exact ``(C_t^A, C_t^I)`` for ``0 <= t < T``."""
    basis = canonical_search(g, c, T)
    a = g.adjacency(dtype=object)
    eye = np.eye(g.n, dtype=int).astype(object)
    CA = tuple(efficient_matrix(basis, t, a) for t in range(T))
    CI = tuple(efficient_matrix(basis, t, eye) for t in range(T))
    return EfficientStack(basis.words, CA, CI)


def invariant_stack(g: Graph, c: ColorAssignment) -> EfficientStack:
    """The graph invariant: pairs ``(C_t^A, C_t^I)`` for ``0 <= t < n``."""
    return efficient_stack(g, c, g.n)


def augmented_normalized_adjacency(g: Graph) -> np.ndarray:
    """``D̂^{-1/2}(A + 2I)D̂^{-1/2}`` with ``D̂ = D + 2I``."""
    a = g.adjacency(dtype=float)
    dhat = a.sum(axis=1) + 2.0
    s = 1.0 / np.sqrt(dhat)
    return s[:, None] * (a + 2.0 * np.eye(g.n)) * s[None, :]


@dataclass(frozen=True)
class NodeStats:
    widths: tuple[int, ...]
    total: int
    baseline: int

    @property
    def saved(self) -> float:
        return 1.0 - self.total / self.baseline


def node_stats(basis: LayeredBasis, L: int) -> NodeStats:
    """Hidden-layer widths ``|S_L|, …, |S_1|`` plus the single readout node,
    against ``n`` nodes per layer for message passing."""
    if not 1 <= L <= basis.depth:
        raise ValueError("need 1 <= L <= T")
    widths = tuple(len(basis.words[L - ell]) for ell in range(L))
    return NodeStats(widths, sum(widths) + 1, basis.n * L + 1)


def describe_basis(basis: LayeredBasis) -> list[list[str]]:
    return [[format_word(w) for w in s] for s in basis.words]
