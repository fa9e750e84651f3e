"""Vertex colorings with canonical, cross-graph comparable color strings.

Color strings are totally ordered by plain string comparison; that order is
the alphabet order used by the canonical word search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from hashlib import blake2b

import numpy as np

from .graph import Graph

# Longer refinement strings are replaced by a digest of themselves.
_MAX_PLAIN = 64
DEFAULT_FEATURE = "_"


@dataclass(frozen=True)
class ColorAssignment:
    colors: tuple[str, ...]
    alphabet: tuple[str, ...]
    kind: str
    height: int | None = None
    # color -> feature token; filled for combined colorings
    feature_of: dict | None = None

    def __post_init__(self):
        if list(self.alphabet) != sorted(set(self.alphabet)):
            raise ValueError("alphabet must be strictly sorted")
        if set(self.colors) - set(self.alphabet):
            raise ValueError("color outside alphabet")

    def classes(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {a: [] for a in self.alphabet}
        for u, c in enumerate(self.colors):
            out[c].append(u)
        return out

    def partition(self) -> frozenset:
        return frozenset(frozenset(vs) for vs in self.classes().values())

    def feature(self, color: str) -> str:
        if self.feature_of is None:
            return DEFAULT_FEATURE
        return self.feature_of[color]


def _assignment(colors, kind, height=None, feature_of=None) -> ColorAssignment:
    colors = tuple(colors)
    return ColorAssignment(colors, tuple(sorted(set(colors))), kind, height, feature_of)


def _compress(s: str) -> str:
    if len(s) <= _MAX_PLAIN:
        return s
    return "#" + blake2b(s.encode(), digest_size=16).hexdigest()


def refine_step(g: Graph, colors, adj=None) -> list[str]:
    adj = g.neighbors() if adj is None else adj
    return [
        _compress("(" + colors[u] + "|" + ",".join(sorted(colors[v] for v in adj[u])) + ")")
        for u in range(g.n)
    ]


def tree_colors(g: Graph, h: int) -> list[str]:
    if h < 0:
        raise ValueError("height must be non-negative")
    colors = ["0"] * g.n
    adj = g.neighbors()
    for _ in range(h):
        colors = refine_step(g, colors, adj)
    return colors


def tree_coloring(g: Graph, h: int) -> ColorAssignment:
    """Degree refinement of height ``h`` started from the constant color ``"0"``."""
    return _assignment(tree_colors(g, h), "tree", h)


def special_coloring(g: Graph, kind: str) -> ColorAssignment:
    if kind == "trivial":
        return _assignment(["0"] * g.n, "trivial")
    if kind == "identity":
        return _assignment([str(u) for u in range(g.n)], "identity")
    if kind == "degree":
        return _assignment([str(d) for d in g.degrees()], "degree")
    raise ValueError(f"unknown coloring kind {kind!r}")


def combined_coloring(g: Graph, h: int | None) -> ColorAssignment:
    """Pair each vertex's feature token with its refinement color.

    ``h=None`` pairs the feature with the identity coloring instead, which
    puts every vertex in its own class.
    """
    feats = g.features if g.features is not None else (DEFAULT_FEATURE,) * g.n
    base = [str(u) for u in range(g.n)] if h is None else tree_colors(g, h)
    colors = [json.dumps([f, c], separators=(",", ":")) for f, c in zip(feats, base)]
    feature_of = {c: f for c, f in zip(colors, feats)}
    return _assignment(colors, "combined", h, feature_of)


def parse_coloring(spec: str):
    """Turn a CLI spec (``trivial``, ``degree``, ``tree:2``, ``combined:1``,
    ``combined:identity``) into a function ``Graph -> ColorAssignment``."""
    if spec in ("trivial", "identity", "degree"):
        return lambda g: special_coloring(g, spec)
    kind, _, arg = spec.partition(":")
    if kind == "tree" and arg.isdigit():
        h = int(arg)
        return lambda g: tree_coloring(g, h)
    if kind == "combined":
        if arg == "identity":
            return lambda g: combined_coloring(g, None)
        if arg.isdigit():
            h = int(arg)
            return lambda g: combined_coloring(g, h)
    raise ValueError(f"unknown coloring spec {spec!r}")


def partition_matrix(g: Graph, c: ColorAssignment, a: str) -> np.ndarray:
    """Diagonal 0/1 matrix selecting the vertices of color ``a``."""
    if a not in c.alphabet:
        raise KeyError(f"color {a!r} not in alphabet")
    p = np.zeros((g.n, g.n), dtype=object)
    p[:] = 0
    for u, col in enumerate(c.colors):
        if col == a:
            p[u, u] = 1
    return p
