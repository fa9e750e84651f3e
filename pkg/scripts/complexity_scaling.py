"""Time the canonical word search on random graphs and fit a power law in n.

    python scripts/complexity_scaling.py --ns 20,40,80,160 --depth 5
"""

import argparse

from catagg.experiments import power_law_exponent, rows_to_csv, search_timings
from catagg.graph import write_atomic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="20,40,80")
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--p", type=float, default=0.4)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/complexity_scaling.csv")
    args = ap.parse_args()
    rows = search_timings(tuple(int(x) for x in args.ns.split(",")), args.depth, args.p, args.repeats, args.seed)
    write_atomic(args.out, rows_to_csv(rows))
    for r in rows:
        print(f"n={r['n']:4d}  {r['seconds'] * 1e3:9.2f} ms")
    print(f"fitted exponent: {power_law_exponent(rows):.2f}")


if __name__ == "__main__":
    main()
