"""Caterpillar GNN over precomputed efficient matrices, with a hand-written backward pass."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .aggregation import augmented_normalized_adjacency, canonical_search, efficient_matrix
from .coloring import DEFAULT_FEATURE, parse_coloring
from .graph import Dataset, Graph

UNK = "<unk>"


@dataclass
class ModelConfig:
    layers: int = 5
    width: int = 8
    out_channels: int = 1
    channels: tuple | None = None  # explicit c_0..c_L, overrides width/out_channels
    coloring: str = "combined:1"
    combine: str = "add"  # add | concat | none
    activation: str = "relu"  # relu | identity
    dropout: float = 0.0
    weight_decay: float = 0.0
    lr: float = 0.01
    batch_size: int = 64
    epochs: int = 100
    patience: int = 20
    clip: float = 1.0
    loss: str = "bce"  # bce | mse
    seed: int = 0

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("need at least one layer")
        if self.combine not in ("add", "concat", "none"):
            raise ValueError(f"unknown combine {self.combine!r}")
        if self.channels is not None:
            self.channels = tuple(int(c) for c in self.channels)
            if len(self.channels) != self.layers + 1 or min(self.channels) < 1:
                raise ValueError("channels needs layers+1 positive entries")

    def dims(self) -> tuple[int, ...]:
        if self.channels is not None:
            return self.channels
        return (self.width,) * self.layers + (self.out_channels,)

    def in_dims(self) -> tuple[int, ...]:
        """Row width of ``F^(ℓ)``, i.e. the input width of ``W^(ℓ)``."""
        c = self.dims()
        mult = 2 if self.combine == "concat" else 1
        return (c[0],) + tuple(mult * c[ell] for ell in range(1, self.layers))


@dataclass
class GraphLayers:
    """Per-graph matrices: ``mats[ℓ]`` maps level ``L-ℓ`` rows to level
    ``L-ℓ-1`` rows; ``readout`` is ``C_0^I``; ``tokens[t]`` holds the feature
    token of the last color of every word in ``S_t``."""

    mats: list
    readout: np.ndarray
    tokens: list
    sizes: list

    @property
    def nodes(self) -> int:
        return sum(self.sizes[1:]) + 1


def precompute_layers(g: Graph, config: ModelConfig) -> GraphLayers:
    L = config.layers
    c = parse_coloring(config.coloring)(g)
    basis = canonical_search(g, c, L)
    at = augmented_normalized_adjacency(g)
    mats = [efficient_matrix(basis, L - ell - 1, at, exact=False) for ell in range(L - 1)]
    eye = np.eye(g.n, dtype=int).astype(object)
    readout = efficient_matrix(basis, 0, eye).astype(float)
    tokens = [[c.feature(w[-1]) if w else DEFAULT_FEATURE for w in s] for s in basis.words]
    return GraphLayers(mats, readout, tokens, basis.sizes())


# ---------------------------------------------------------------- params

@dataclass
class Params:
    tensors: dict
    vocab: list

    def index(self, tokens) -> np.ndarray:
        lookup = self._lookup()
        return np.array([lookup.get(t, 0) for t in tokens], dtype=np.int64)

    def _lookup(self):
        if getattr(self, "_cache", None) is None or len(self._cache) != len(self.vocab):
            self._cache = {t: i for i, t in enumerate(self.vocab)}
        return self._cache

    def copy(self) -> "Params":
        return Params({k: v.copy() for k, v in self.tensors.items()}, list(self.vocab))

    def to_json(self) -> dict:
        return {
            "vocab": self.vocab,
            "tensors": {k: {"shape": list(v.shape), "data": v.ravel().tolist()} for k, v in self.tensors.items()},
        }

    @classmethod
    def from_json(cls, obj) -> "Params":
        tensors = {
            k: np.array(v["data"], dtype=float).reshape(v["shape"]) for k, v in obj["tensors"].items()
        }
        return cls(tensors, list(obj["vocab"]))


def init_params(config: ModelConfig, vocab, seed: int | None = None) -> Params:
    rng = np.random.default_rng(config.seed if seed is None else seed)
    c = config.dims()
    d = config.in_dims()
    L = config.layers
    vocab = [UNK] + sorted(set(vocab) - {UNK})
    tensors = {"E_in": rng.normal(0.0, 1.0, size=(len(vocab), c[0]))}
    for ell in range(L):
        bound = np.sqrt(6.0 / (d[ell] + c[ell + 1]))
        tensors[f"W{ell}"] = rng.uniform(-bound, bound, size=(d[ell], c[ell + 1]))
    if config.combine != "none":
        for ell in range(L - 1):
            tensors[f"E{ell}"] = rng.normal(0.0, 1.0, size=(len(vocab), c[ell + 1]))
    tensors["b"] = np.zeros(c[L])
    return Params(tensors, vocab)


# ----------------------------------------------------------------- batch

def _block_diag(mats) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    r0 = c0 = 0
    for m in mats:
        m = np.asarray(m, dtype=float)
        nz = np.nonzero(m)
        rows.append(nz[0] + r0)
        cols.append(nz[1] + c0)
        vals.append(m[nz])
        r0 += m.shape[0]
        c0 += m.shape[1]
    if not mats:
        return sp.csr_matrix((0, 0))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(r0, c0)
    )


@dataclass
class Batch:
    mats: list
    readout: sp.csr_matrix
    idx: list  # idx[t]: vocab index per stacked word of level t
    size: int


def collate(layers: list[GraphLayers], params: Params, L: int) -> Batch:
    mats = [_block_diag([gl.mats[ell] for gl in layers]) for ell in range(L - 1)]
    readout = _block_diag([gl.readout for gl in layers])
    idx = [params.index([tok for gl in layers for tok in gl.tokens[t]]) for t in range(L + 1)]
    return Batch(mats, readout, idx, len(layers))


# --------------------------------------------------------------- forward

def _act(z, kind):
    return np.maximum(z, 0.0) if kind == "relu" else z


def _forward(params: Params, batch: Batch, config: ModelConfig, mask=None):
    t = params.tensors
    L = config.layers
    c = config.dims()
    F = t["E_in"][batch.idx[L]]
    cache = []
    for ell in range(L - 1):
        P = batch.mats[ell] @ F
        Z = P @ t[f"W{ell}"]
        H = _act(Z, config.activation)
        if config.combine == "add":
            F = H + t[f"E{ell}"][batch.idx[L - ell - 1]]
        elif config.combine == "concat":
            F = np.hstack([H, t[f"E{ell}"][batch.idx[L - ell - 1]]])
        else:
            F = H
        cache.append((P, Z))
    if mask is not None:
        F = F * mask
    R = batch.readout @ F
    out = R @ t[f"W{L - 1}"] + t["b"]
    assert out.shape == (batch.size, c[L])
    return out, (cache, R, mask)


def forward(params: Params, layers, config: ModelConfig) -> np.ndarray:
    """Graph-level output(s).  ``layers`` is one ``GraphLayers`` (returns a
    vector of size ``c_L``) or a list of them (returns a matrix)."""
    single = isinstance(layers, GraphLayers)
    batch = collate([layers] if single else list(layers), params, config.layers)
    out, _ = _forward(params, batch, config)
    return out[0] if single else out


def _backward(params: Params, batch: Batch, config: ModelConfig, dout, saved) -> dict:
    t = params.tensors
    L = config.layers
    c = config.dims()
    cache, R, mask = saved
    grads = {k: np.zeros_like(v) for k, v in t.items()}
    grads["b"] += dout.sum(axis=0)
    grads[f"W{L - 1}"] += R.T @ dout
    dF = batch.readout.T @ (dout @ t[f"W{L - 1}"].T)
    if mask is not None:
        dF = dF * mask
    for ell in reversed(range(L - 1)):
        P, Z = cache[ell]
        if config.combine == "add":
            dH = dF
            np.add.at(grads[f"E{ell}"], batch.idx[L - ell - 1], dF)
        elif config.combine == "concat":
            dH = dF[:, : c[ell + 1]]
            np.add.at(grads[f"E{ell}"], batch.idx[L - ell - 1], dF[:, c[ell + 1]:])
        else:
            dH = dF
        dZ = dH * (Z > 0) if config.activation == "relu" else dH
        grads[f"W{ell}"] += P.T @ dZ
        dF = batch.mats[ell].T @ (dZ @ t[f"W{ell}"].T)
    np.add.at(grads["E_in"], batch.idx[L], dF)
    return grads


def _loss(out, y, kind):
    """Mean loss over the batch and its gradient w.r.t. ``out``."""
    n = out.shape[0]
    if kind == "bce":
        z = out[:, 0]
        loss = np.logaddexp(0.0, z) - y * z
        d = np.zeros_like(out)
        d[:, 0] = (expit(z) - y) / n
        return float(loss.mean()), d
    if kind == "mse":
        diff = out - y.reshape(n, -1)
        return float((diff ** 2).mean()), 2.0 * diff / diff.size
    raise ValueError(f"unknown loss {kind!r}")


def loss_and_gradients(params, layers, targets, config: ModelConfig, loss_scale: float = 1.0, mask=None):
    batch = collate(list(layers), params, config.layers)
    out, saved = _forward(params, batch, config, mask)
    loss, dout = _loss(out, np.asarray(targets, dtype=float), config.loss)
    grads = _backward(params, batch, config, loss_scale * dout, saved)
    return loss_scale * loss, grads


def gradients(params, layers, targets, config: ModelConfig, loss_scale: float = 1.0) -> dict:
    """Reverse-mode gradients of the mean batch loss (no dropout)."""
    if len(layers) == 0:
        raise ValueError("empty batch")
    return loss_and_gradients(params, layers, targets, config, loss_scale)[1]


def batch_loss(params, layers, targets, config: ModelConfig) -> float:
    batch = collate(list(layers), params, config.layers)
    out, _ = _forward(params, batch, config)
    return _loss(out, np.asarray(targets, dtype=float), config.loss)[0]


# -------------------------------------------------------------- reference

def gcn_reference_forward(g: Graph, params: Params, config: ModelConfig) -> np.ndarray:
    """Dense GCN with the same parameters and a mean readout."""
    if config.combine != "none":
        raise ValueError("the GCN reference ignores feature reinjection (combine='none')")
    t = params.tensors
    L = config.layers
    feats = g.features if g.features is not None else (DEFAULT_FEATURE,) * g.n
    H = t["E_in"][params.index(feats)]
    at = augmented_normalized_adjacency(g)
    for ell in range(L - 1):
        H = _act(at @ H @ t[f"W{ell}"], config.activation)
    return H.mean(axis=0) @ t[f"W{L - 1}"] + t["b"]


# --------------------------------------------------------------- training

@dataclass
class TrainResult:
    params: Params
    history: list = field(default_factory=list)
    best_epoch: int = 0

    def metrics_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epoch", "split", "loss", "metric"])
        for row in self.history:
            w.writerow([row["epoch"], row["split"], repr(row["loss"]), repr(row["metric"])])
        return buf.getvalue()


def _metric(out, y, kind):
    if kind == "bce":
        return float(np.mean((out[:, 0] > 0).astype(float) == y))
    return float(np.mean(np.abs(out.reshape(len(y), -1) - y.reshape(len(y), -1))))


def evaluate(params, layers, targets, config: ModelConfig) -> tuple[float, float]:
    y = np.asarray(targets, dtype=float)
    out = forward(params, list(layers), config)
    return _loss(out, y, config.loss)[0], _metric(out, y, config.loss)


class Adam:
    def __init__(self, params: Params, lr, weight_decay=0.0, betas=(0.9, 0.999), eps=1e-8):
        self.lr, self.wd, self.betas, self.eps = lr, weight_decay, betas, eps
        self.m = {k: np.zeros_like(v) for k, v in params.tensors.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.tensors.items()}
        self.step_count = 0

    def step(self, params: Params, grads: dict) -> None:
        self.step_count += 1
        b1, b2 = self.betas
        for k, p in params.tensors.items():
            g = grads[k] + self.wd * p
            self.m[k] = b1 * self.m[k] + (1 - b1) * g
            self.v[k] = b2 * self.v[k] + (1 - b2) * g * g
            mhat = self.m[k] / (1 - b1 ** self.step_count)
            vhat = self.v[k] / (1 - b2 ** self.step_count)
            p -= self.lr * mhat / (np.sqrt(vhat) + self.eps)


def clip_gradients(grads: dict, max_norm: float) -> float:
    norm = float(np.sqrt(sum(float((g * g).sum()) for g in grads.values())))
    if max_norm and norm > max_norm:
        for g in grads.values():
            g *= max_norm / norm
    return norm


def split_indices(count: int, val_fraction: float, seed: int):
    order = np.random.default_rng(seed).permutation(count)
    nval = max(1, int(round(count * val_fraction)))
    return sorted(order[nval:].tolist()), sorted(order[:nval].tolist())


def train(dataset: Dataset, config: ModelConfig, val_fraction: float = 0.2, layers=None, log=None) -> TrainResult:
    """Mini-batch Adam with weight decay, final-layer dropout, gradient
    clipping and early stopping on validation loss."""
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    if layers is None:
        layers = [precompute_layers(g, config) for g in dataset.graphs]
    vocab = {tok for gl in layers for lv in gl.tokens for tok in lv}
    params = init_params(config, vocab)
    y = np.asarray(dataset.targets, dtype=float)
    tr, va = split_indices(len(dataset), val_fraction, config.seed)
    rng = np.random.default_rng(config.seed + 1)
    opt = Adam(params, config.lr, config.weight_decay)
    best = (np.inf, params.copy(), 0)
    history = []
    L = config.layers
    width = config.in_dims()[L - 1]
    stale = 0
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(tr)
        losses = []
        for start in range(0, len(order), config.batch_size):
            idx = order[start: start + config.batch_size]
            gl = [layers[i] for i in idx]
            mask = None
            if config.dropout > 0:
                rows = sum(x.sizes[1] for x in gl)
                keep = rng.random((rows, width)) >= config.dropout
                mask = keep / (1.0 - config.dropout)
            loss, grads = loss_and_gradients(params, gl, y[idx], config, mask=mask)
            clip_gradients(grads, config.clip)
            opt.step(params, grads)
            losses.append(loss * len(idx))
        tr_loss, tr_metric = evaluate(params, [layers[i] for i in tr], y[tr], config)
        va_loss, va_metric = evaluate(params, [layers[i] for i in va], y[va], config)
        history.append({"epoch": epoch, "split": "train", "loss": tr_loss, "metric": tr_metric})
        history.append({"epoch": epoch, "split": "val", "loss": va_loss, "metric": va_metric})
        if log is not None:
            log(epoch, tr_loss, tr_metric, va_loss, va_metric)
        if va_loss < best[0]:
            best = (va_loss, params.copy(), epoch)
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    return TrainResult(best[1], history, best[2])


def save_checkpoint(path, params: Params, config: ModelConfig) -> None:
    from .graph import write_atomic

    obj = {"config": asdict(config), "params": params.to_json()}
    write_atomic(path, json.dumps(obj, separators=(",", ":")))


def load_checkpoint(path) -> tuple[Params, ModelConfig]:
    with open(path) as fh:
        obj = json.load(fh)
    return Params.from_json(obj["params"]), ModelConfig(**obj["config"])
