import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from catagg.graph import Graph, random_graph


@st.composite
def graphs(draw, min_n=1, max_n=7, min_degree=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph(n, tuple(p for p, keep in zip(pairs, mask) if keep))
    if min_degree:
        assume(min(g.degrees()) >= min_degree)
    return g


def random_graphs(seed, count, nmin, nmax, p=0.4, min_degree=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(nmin, nmax + 1))
        g = random_graph(n, p, int(rng.integers(2**31)))
        if min(g.degrees()) >= min_degree:
            out.append(g)
    return out


K3 = Graph(3, ((0, 1), (0, 2), (1, 2)))
P3 = Graph(3, ((0, 1), (1, 2)))
