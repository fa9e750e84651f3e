"""Simple undirected graphs plus the loaders and generators that produce them."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphValidationError(ValueError):
    """Raised for self-loops, duplicate edges or out-of-range endpoints."""


class GraphParseError(ValueError):
    """Raised when a graph file cannot be parsed."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``features`` is either ``None`` or a tuple of categorical tokens, one per
    vertex.  Edges are stored as a sorted tuple of ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    features: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise GraphValidationError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"edge {{{u},{v}}} out of range for n={self.n}")
            e = _norm_edge(u, v)
            if e in seen:
                raise GraphValidationError(f"duplicate edge {{{u},{v}}}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.features is not None:
            if len(self.features) != self.n:
                raise GraphValidationError("features must have one token per vertex")
            object.__setattr__(self, "features", tuple(str(f) for f in self.features))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], features=None) -> "Graph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges), features)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges:
            a[u, v] = 1
            a[v, u] = 1
        return a

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.neighbors()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return self.n >= 1 and self.m == self.n - 1 and self.is_connected()

    def to_json(self, target=None) -> dict:
        out: dict = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.features is not None:
            out["features"] = list(self.features)
        if target is not None:
            out["target"] = target
        return out


@dataclass
class Dataset:
    graphs: list[Graph]
    targets: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if len(self.graphs) != len(self.targets):
            raise GraphValidationError("graphs and targets differ in length")

    def __len__(self) -> int:
        return len(self.graphs)


def graph_matrices(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Exact adjacency and degree matrices as integer object arrays."""
    a = np.zeros((g.n, g.n), dtype=object)
    a[:] = 0
    for u, v in g.edges:
        a[u, v] = 1
        a[v, u] = 1
    d = np.zeros((g.n, g.n), dtype=object)
    d[:] = 0
    for u, k in enumerate(g.degrees()):
        d[u, u] = k
    return a, d


# ---------------------------------------------------------------- loading

def _graph_from_obj(obj) -> tuple[Graph, object]:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphParseError("graph object needs 'n' and 'edges'")
    try:
        n = int(obj["n"])
        edges = [(int(e[0]), int(e[1])) for e in obj["edges"]]
        if any(len(e) != 2 for e in obj["edges"]):
            raise GraphParseError("edges must be pairs")
    except (TypeError, ValueError, IndexError) as exc:
        raise GraphParseError(f"malformed graph object: {exc}") from exc
    feats = obj.get("features")
    return Graph.from_edges(n, edges, feats), obj.get("target")


def _load_json(path: Path) -> Dataset:
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"{path}: {exc}") from exc
    objs = data if isinstance(data, list) else [data]
    graphs, targets = [], []
    for obj in objs:
        g, y = _graph_from_obj(obj)
        graphs.append(g)
        targets.append(y)
    return Dataset(graphs, targets, path.stem)


def _read_rows(path: Path) -> list[list[str]]:
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if line:
            rows.append([tok.strip() for tok in line.split(",")])
    return rows


def _load_tudataset(path: Path) -> Dataset:
    a_files = sorted(path.glob("*_A.txt"))
    if len(a_files) != 1:
        raise GraphParseError(f"{path}: expected exactly one *_A.txt file")
    prefix = a_files[0].name[: -len("_A.txt")]

    def part(suffix):
        return path / f"{prefix}_{suffix}.txt"

    try:
        indicator = [int(r[0]) for r in _read_rows(part("graph_indicator"))]
        labels = [r[0] for r in _read_rows(part("graph_labels"))]
        edge_rows = [(int(r[0]), int(r[1])) for r in _read_rows(a_files[0])]
        node_labels = None
        if part("node_labels").exists():
            node_labels = [r[0] for r in _read_rows(part("node_labels"))]
    except (OSError, ValueError, IndexError) as exc:
        raise GraphParseError(f"{path}: {exc}") from exc
    if node_labels is not None and len(node_labels) != len(indicator):
        raise GraphParseError("node label count does not match graph indicator")

    count = max(indicator) if indicator else 0
    if len(labels) != count:
        raise GraphParseError("graph label count does not match graph indicator")
    # global 1-indexed node id -> (graph index, local id), file order
    local = []
    sizes = [0] * count
    for gid in indicator:
        local.append(sizes[gid - 1])
        sizes[gid - 1] += 1
    edges: list[set] = [set() for _ in range(count)]
    for u, v in edge_rows:
        if not (1 <= u <= len(indicator) and 1 <= v <= len(indicator)):
            raise GraphValidationError(f"edge ({u},{v}) refers to unknown node")
        gu, gv = indicator[u - 1] - 1, indicator[v - 1] - 1
        if gu != gv:
            raise GraphValidationError(f"edge ({u},{v}) crosses graphs")
        a, b = local[u - 1], local[v - 1]
        if a == b:
            raise GraphValidationError(f"self-loop at node {u}")
        # TUDataset lists both orientations of every undirected edge
        edges[gu].add(_norm_edge(a, b))
    feats: list[list[str]] = [[] for _ in range(count)]
    if node_labels is not None:
        for i, gid in enumerate(indicator):
            feats[gid - 1].append(node_labels[i])
    graphs = [
        Graph(sizes[i], tuple(sorted(edges[i])), tuple(feats[i]) if node_labels is not None else None)
        for i in range(count)
    ]
    targets = [_parse_label(y) for y in labels]
    return Dataset(graphs, targets, prefix)


def _parse_label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def load_graph_collection(path, format: str | None = None) -> Dataset:
    """Load a JSON graph / graph array or a TUDataset directory."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if format is None:
        format = "tudataset" if path.is_dir() else "json"
    if format == "json":
        return _load_json(path)
    if format == "tudataset":
        return _load_tudataset(path)
    raise ValueError(f"unknown format {format!r}")


def save_graph_collection(path, dataset: Dataset) -> None:
    objs = [g.to_json(y) for g, y in zip(dataset.graphs, dataset.targets)]
    write_atomic(path, json.dumps(objs, separators=(",", ":")))


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


# ------------------------------------------------------------- generators

def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p); a pure function of its arguments."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def permute_graph(g: Graph, perm: Sequence[int]) -> Graph:
    """Relabel vertex ``u`` as ``perm[u]``; features move with their vertex."""
    perm = [int(x) for x in perm]
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm is not a bijection on the vertex set")
    edges = tuple(_norm_edge(perm[u], perm[v]) for u, v in g.edges)
    feats = None
    if g.features is not None:
        inv = [0] * g.n
        for u, pu in enumerate(perm):
            inv[pu] = u
        feats = tuple(g.features[inv[x]] for x in range(g.n))
    return Graph(g.n, edges, feats)


def two_switch(g: Graph, remove: Sequence[Sequence[int]], add: Sequence[Sequence[int]]) -> Graph:
    """Remove two edges and add two vertex pairs."""
    current = set(g.edges)
    rem = [_norm_edge(*e) for e in remove]
    new = [_norm_edge(*e) for e in add]
    if len(rem) != 2 or len(new) != 2 or rem[0] == rem[1] or new[0] == new[1]:
        raise ValueError("two_switch needs two distinct edges to remove and two pairs to add")
    for e in rem:
        if e not in current:
            raise ValueError(f"edge {e} not present")
        current.discard(e)
    for e in new:
        if e[0] == e[1]:
            raise ValueError(f"pair {e} is a self-loop")
        if e in current:
            raise ValueError(f"edge {e} already present")
        current.add(e)
    return Graph(g.n, tuple(current), g.features)


def sum_graph(x1: int, x2: int, bits: int) -> Graph:
    """Encode two ``bits``-bit integers as a root-anchored graph.

    Vertex 0 is the root; vertices ``1..B`` and ``B+1..2B`` are the position
    paths of ``x1`` and ``x2`` (position 1 adjacent to the root, carrying the
    least significant bit).  A pendant leaf hangs off position ``j`` iff bit
    ``j-1`` is set; leaves are numbered after the paths, ``x1`` first.
    """
    if not (0 <= x1 < 2 ** bits and 0 <= x2 < 2 ** bits):
        raise ValueError("integers do not fit the bit width")
    edges = []
    nxt = 1 + 2 * bits
    for i, x in enumerate((x1, x2)):
        base = 1 + i * bits
        edges.append((0, base))
        for j in range(1, bits):
            edges.append((base + j - 1, base + j))
    for i, x in enumerate((x1, x2)):
        base = 1 + i * bits
        for j in range(bits):
            if (x >> j) & 1:
                edges.append((base + j, nxt))
                nxt += 1
    return Graph(nxt, tuple(edges))


def gen_sum_dataset(bits: int, count: int, seed: int) -> Dataset:
    """Balanced binary task: does the pair of encoded integers sum to 2**(bits-1)?"""
    if bits < 2 or count < 2:
        raise ValueError("need bits >= 2 and count >= 2")
    rng = np.random.default_rng(seed)
    target = 2 ** (bits - 1)
    max_offset = (2 * target) // 3
    quota = {1: count // 2, 0: count - count // 2}
    graphs, labels = [], []
    while len(graphs) < count:
        x1 = int(rng.integers(0, target + 1))
        x2 = target - x1
        if rng.random() < 0.5:
            offset = int(rng.integers(1, max_offset + 1))
            if rng.random() < 0.5:
                x1 += offset
            else:
                x2 += offset
        label = int(x1 + x2 == target)
        if quota[label] == 0:
            continue
        quota[label] -= 1
        graphs.append(sum_graph(x1, x2, bits))
        labels.append(label)
    return Dataset(graphs, labels, f"sum{bits}")
