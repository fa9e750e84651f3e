"""Experiment drivers shared by the scripts and the acceptance tests."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from .aggregation import canonical_search
from .catgnn import ModelConfig, precompute_layers, train
from .coloring import special_coloring
from .graph import gen_sum_dataset, random_graph


@dataclass
class SweepConfig:
    bits: int = 8
    count: int = 2000
    layers: int = 8
    width: int = 8
    lr: float = 0.005
    epochs: int = 60
    batch_size: int = 64
    seed: int = 0
    colorings: tuple = ("combined:0", "combined:1", "combined:2", "combined:3", "combined:identity")


def run_synthetic(cfg: SweepConfig, coloring: str, dataset=None) -> dict:
    """Train one model on the sum task; CPU time covers precompute and training."""
    ds = dataset if dataset is not None else gen_sum_dataset(cfg.bits, cfg.count, cfg.seed)
    mc = ModelConfig(layers=cfg.layers, width=cfg.width, coloring=coloring, lr=cfg.lr,
                     epochs=cfg.epochs, batch_size=cfg.batch_size, seed=cfg.seed)
    start = time.process_time()
    layers = [precompute_layers(g, mc) for g in ds.graphs]
    res = train(ds, mc, layers=layers)
    cpu = time.process_time() - start
    val = {r["epoch"]: r["metric"] for r in res.history if r["split"] == "val"}
    return {
        "coloring": coloring,
        "avg_nodes": float(np.mean([gl.nodes for gl in layers])),
        "best_epoch": res.best_epoch,
        "val_acc": val[res.best_epoch] if res.best_epoch else float("nan"),
        "max_val_acc": max(val.values()),
        "epochs_run": len(val),
        "cpu_seconds": cpu,
    }


def synthetic_sweep(cfg: SweepConfig) -> list[dict]:
    ds = gen_sum_dataset(cfg.bits, cfg.count, cfg.seed)
    return [run_synthetic(cfg, col, ds) for col in cfg.colorings]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def search_timings(ns=(20, 40, 80), T: int = 5, p: float = 0.4, repeats: int = 5, seed: int = 0) -> list[dict]:
    """Median wall time of the canonical word search with degree colors."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in ns:
        times = []
        for _ in range(repeats):
            g = random_graph(n, p, int(rng.integers(2**31)))
            c = special_coloring(g, "degree")
            start = time.perf_counter()
            canonical_search(g, c, T)
            times.append(time.perf_counter() - start)
        rows.append({"n": n, "seconds": float(np.median(times))})
    return rows


def power_law_exponent(rows: list[dict]) -> float:
    x = np.log([r["n"] for r in rows])
    y = np.log([r["seconds"] for r in rows])
    return float(np.polyfit(x, y, 1)[0])
