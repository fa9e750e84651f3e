"""Computation-graph size per refinement height on a random corpus.

Writes the corpus, then calls ``catagg stats`` on it.

    python scripts/node_savings.py --count 100 --layers 5
"""

import argparse
import sys

import numpy as np

from catagg.cli import main as catagg
from catagg.graph import Dataset, random_graph, save_graph_collection


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--nmin", type=int, default=4)
    ap.add_argument("--nmax", type=int, default=16)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--layers", type=int, default=5)
    ap.add_argument("--coloring", default="tree:0..6,identity")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    graphs = []
    while len(graphs) < args.count:
        g = random_graph(int(rng.integers(args.nmin, args.nmax + 1)), args.p, int(rng.integers(2**31)))
        if min(g.degrees()) >= 1:
            graphs.append(g)
    corpus = f"{args.outdir}/random_corpus.json"
    save_graph_collection(corpus, Dataset(graphs, [0] * len(graphs), "random"))
    out = f"{args.outdir}/node_savings.csv"
    rc = catagg(["stats", "--in", corpus, "--coloring", args.coloring, "--layers", str(args.layers),
                 "--jobs", str(args.jobs), "--out", out])
    if rc == 0:
        print(open(out).read(), end="")
    sys.exit(rc)


if __name__ == "__main__":
    main()
