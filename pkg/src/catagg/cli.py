"""Command-line front end: ``catagg <command> [flags]``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, verify
from .aggregation import canonical_search, efficient_stack, node_stats
from .catgnn import ModelConfig, save_checkpoint, train
from .coloring import parse_coloring
from .graph import GraphParseError, GraphValidationError, gen_sum_dataset, load_graph_collection, save_graph_collection, write_atomic
from .homcount import find_separating_pair
from .walks import format_word, walk_refinement


class UsageError(Exception):
    """Bad arguments or invalid input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunManifest:
    command: str
    arguments: dict
    seed: int | None
    version: str = __version__
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    def write(self, path: Path) -> None:
        write_atomic(path, json.dumps(asdict(self), sort_keys=True, indent=2) + "\n")


def _digest(path: Path) -> str:
    h = hashlib.sha256()
    files = sorted(p for p in path.rglob("*") if p.is_file()) if path.is_dir() else [path]
    for p in files:
        if path.is_dir():
            h.update(p.relative_to(path).as_posix().encode())
        h.update(p.read_bytes())
    return h.hexdigest()


def _manifest(args, outputs: list[Path], anchor: Path) -> None:
    arguments = {k: v for k, v in vars(args).items() if k != "func"}
    inputs = {}
    if getattr(args, "inp", None):
        inputs[args.inp] = _digest(Path(args.inp))
    man = RunManifest(args.command, arguments, getattr(args, "seed", None), inputs=inputs,
                      outputs=[str(p) for p in outputs])
    target = anchor / "manifest.json" if anchor.is_dir() else anchor.with_name(anchor.name + ".manifest.json")
    man.write(target)


def _load(args):
    if not args.inp:
        raise UsageError("--in is required")
    try:
        ds = load_graph_collection(args.inp)
    except FileNotFoundError as exc:
        raise UsageError(f"input not found: {exc}") from exc
    except (GraphParseError, GraphValidationError) as exc:
        raise UsageError(str(exc)) from exc
    if len(ds) == 0:
        raise UsageError("input holds no graphs")
    return ds


def _coloring(spec: str):
    try:
        return parse_coloring(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _require_out(args) -> Path:
    if not args.out:
        raise UsageError("--out is required")
    return Path(args.out)


def _map(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ------------------------------------------------------------- commands

def _precompute_one(job):
    g, spec, depth = job
    return efficient_stack(g, parse_coloring(spec)(g), depth).to_json()


def cmd_precompute(args):
    ds = _load(args)
    out = _require_out(args)
    _coloring(args.coloring)
    if args.depth < 1:
        raise UsageError("--depth must be positive")
    arts = _map(_precompute_one, [(g, args.coloring, args.depth) for g in ds.graphs], args.jobs)
    obj = arts[0] if len(arts) == 1 else {"graphs": arts}
    write_atomic(out, json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")
    _manifest(args, [out], out)


def cmd_walks(args):
    ds = _load(args)
    out = _require_out(args)
    col = _coloring(args.coloring)
    if not 0 <= args.graph < len(ds):
        raise UsageError(f"--graph must be in [0, {len(ds)})")
    g = ds.graphs[args.graph]
    wr = walk_refinement(g, col(g), args.depth)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["word", "count"])
    for word in sorted(wr.multiset):
        w.writerow([format_word(word), wr.multiset[word]])
    write_atomic(out, buf.getvalue())
    _manifest(args, [out], out)


def cmd_verify(args):
    try:
        rows = verify.run(args.suite, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    width = max(len(f"{s}/{c}") for s, c, _ in rows)
    for suite, check, ok in rows:
        print(f"{(suite + '/' + check).ljust(width)}  {'PASS' if ok else 'FAIL'}")
    if args.out:
        out = Path(args.out)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed"])
        w.writerows(rows)
        write_atomic(out, buf.getvalue())
        _manifest(args, [out], out)
    return 0 if all(ok for _, _, ok in rows) else 1


def cmd_separate(args):
    out = _require_out(args)
    if args.n < 6:
        raise UsageError("--n must be at least 6")
    res = find_separating_pair(args.n, args.seed, args.budget)
    print(f"candidates examined: {res.candidates}")
    if not res.found:
        print("no separating pair within budget", file=sys.stderr)
        return 1
    paths = [out / "G.json", out / "H.json", out / "certificate.json"]
    write_atomic(paths[0], json.dumps(res.G.to_json(), separators=(",", ":")) + "\n")
    write_atomic(paths[1], json.dumps(res.H.to_json(), separators=(",", ":")) + "\n")
    cert = dict(res.certificate, candidates=res.candidates)
    write_atomic(paths[2], json.dumps(cert, sort_keys=True, indent=2) + "\n")
    _manifest(args, paths, out)
    return 0


def cmd_gen_synth(args):
    out = _require_out(args)
    try:
        ds = gen_sum_dataset(args.bits, args.count, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    save_graph_collection(out, ds)
    _manifest(args, [out], out)


def cmd_train(args):
    ds = _load(args)
    out = _require_out(args)
    _coloring(args.coloring)
    try:
        cfg = ModelConfig(layers=args.layers, width=args.width, coloring=args.coloring, combine=args.combine,
                          lr=args.lr, epochs=args.epochs, batch_size=args.batch_size, dropout=args.dropout,
                          weight_decay=args.weight_decay, loss=args.loss, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = train(ds, cfg, log=lambda e, tl, tm, vl, vm: print(f"epoch {e:4d}  train {tl:.4f}/{tm:.4f}  val {vl:.4f}/{vm:.4f}"))
    paths = [out / "checkpoint.json", out / "metrics.csv"]
    save_checkpoint(paths[0], res.params, cfg)
    write_atomic(paths[1], res.metrics_csv())
    _manifest(args, paths, out)


def parse_range(spec: str) -> list[str]:
    """``tree:0..3,identity`` -> ``['tree:0', 'tree:1', 'tree:2', 'tree:3', 'identity']``."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        head, _, arg = part.partition(":")
        if ".." in arg:
            lo, hi = arg.split("..")
            try:
                lo, hi = int(lo), int(hi)
            except ValueError as exc:
                raise UsageError(f"bad range {part!r}") from exc
            out.extend(f"{head}:{h}" for h in range(lo, hi + 1))
        else:
            out.append(part)
    for s in out:
        _coloring(s)
    return out


def _stats_one(job):
    g, spec, L = job
    st = node_stats(canonical_search(g, parse_coloring(spec)(g), L), L)
    return st.total, st.saved, st.widths


def cmd_stats(args):
    ds = _load(args)
    out = _require_out(args)
    if args.layers < 1:
        raise UsageError("--layers must be positive")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["h", "avg_nodes", "percent_saved"])
    for spec in parse_range(args.coloring):
        rows = _map(_stats_one, [(g, spec, args.layers) for g in ds.graphs], args.jobs)
        label = spec.split(":", 1)[1] if spec.startswith("tree:") else spec
        w.writerow([label, repr(float(np.mean([r[0] for r in rows]))), repr(100.0 * float(np.mean([r[1] for r in rows])))])
    write_atomic(out, buf.getvalue())
    _manifest(args, [out], out)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="catagg", description="Efficient aggregation over colored walks.")
    p.add_argument("--version", action="version", version=f"catagg {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *flags):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        for flag in flags:
            flag(sp)
        return sp

    def f_in(sp):
        sp.add_argument("--in", dest="inp", help="graph JSON file or TUDataset directory")

    def f_out(sp):
        sp.add_argument("--out")

    def f_col(default):
        return lambda sp: sp.add_argument("--coloring", default=default)

    def f_seed(sp):
        sp.add_argument("--seed", type=int, default=0)

    def f_jobs(sp):
        sp.add_argument("--jobs", type=int, default=1)

    def f_depth(default):
        return lambda sp: sp.add_argument("--depth", type=int, default=default)

    def f_layers(default):
        return lambda sp: sp.add_argument("--layers", type=int, default=default)

    add("precompute", cmd_precompute, f_in, f_out, f_col("tree:1"), f_depth(5), f_jobs)
    sp = add("walks", cmd_walks, f_in, f_out, f_col("degree"), f_depth(4))
    sp.add_argument("--graph", type=int, default=0, help="index within the collection")
    sp = add("verify", cmd_verify, f_seed, f_out)
    sp.add_argument("--suite", default="all", choices=["all", *verify.SUITES])
    sp = add("separate", cmd_separate, f_out, f_seed)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--budget", type=int, default=10**6)
    sp = add("gen-synth", cmd_gen_synth, f_out, f_seed)
    sp.add_argument("--bits", type=int, default=8)
    sp.add_argument("--count", type=int, default=2000)
    sp = add("train", cmd_train, f_in, f_out, f_col("combined:1"), f_layers(8), f_seed)
    sp.add_argument("--width", type=int, default=8)
    sp.add_argument("--combine", default="add", choices=["add", "concat", "none"])
    sp.add_argument("--lr", type=float, default=0.005)
    sp.add_argument("--epochs", type=int, default=60)
    sp.add_argument("--batch-size", type=int, default=64)
    sp.add_argument("--dropout", type=float, default=0.0)
    sp.add_argument("--weight-decay", type=float, default=0.0)
    sp.add_argument("--loss", default="bce", choices=["bce", "mse"])
    add("stats", cmd_stats, f_in, f_out, f_col("tree:0..3,identity"), f_layers(5), f_jobs)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        rc = args.func(args)
        return 0 if rc is None else rc
    except UsageError as exc:
        print(f"catagg: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"catagg: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
