"""Edge-aware message-passing discriminator with exact backpropagation.

Each layer computes ``m_u = (1 + eps) x_u + sum_v relu(x_v + e_uv @ W_e)``
and then ``relu(norm(m_u @ W + b))`` with a parameter-free layer norm.
Messages and pooled node states are summed in sorted order so the logit is
bit-for-bit invariant under node relabelling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import MolGraph
from patchmol.errors import EmptyBatch, EmptyGraph, ShapeMismatch
from patchmol.nets.ema import EMAState, ema_update
from patchmol.nets.optim import AdamState, apply_step

NODE_FEATURES = ("atomic_number", "total_valence", "degree", "aromatic", "formal_charge", "total_h")
EDGE_FEATURES = ("bond_order", "aromatic", "conjugated", "in_ring")
LN_EPS = 1e-5
PARAM_NAMES = ("eps", "we1", "w1", "b1", "we2", "w2", "b2", "v1", "c1", "v2", "c2")


def node_features(g: MolGraph) -> np.ndarray:
    out = np.zeros((g.n_atoms, len(NODE_FEATURES)))
    for a, at in enumerate(g.atoms):
        out[a] = (
            ELEMENTS[at.symbol].atomic_number,
            g.explicit_valence(a) + at.implicit_hydrogens,
            g.degree(a),
            float(at.aromatic),
            at.formal_charge,
            at.implicit_hydrogens,
        )
    return out


def edge_features(g: MolGraph) -> np.ndarray:
    out = np.zeros((g.n_bonds, len(EDGE_FEATURES)))
    for k, b in enumerate(g.bonds):
        out[k] = (1.5 if b.aromatic else b.order, float(b.aromatic), float(b.conjugated), float(b.in_ring))
    return out


@dataclass(frozen=True)
class GraphBatch:
    """Disjoint union of graphs with directed edge lists and padded in-neighbour slots."""

    x: np.ndarray
    ef: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    slots: np.ndarray  # (n_nodes, max_in_degree) directed-edge ids, -1 padded
    offsets: np.ndarray  # node offset of each graph, plus the total at the end

    @property
    def n_graphs(self) -> int:
        return len(self.offsets) - 1


def make_batch(graphs) -> GraphBatch:
    graphs = list(graphs)
    if not graphs:
        raise EmptyBatch("no graphs")
    xs, efs, srcs, dsts, offsets = [], [], [], [], [0]
    for g in graphs:
        if g.n_atoms == 0:
            raise EmptyGraph("graph has no atoms")
        base = offsets[-1]
        xs.append(node_features(g))
        ef = edge_features(g)
        i = np.array([b.i for b in g.bonds], dtype=np.int64) + base
        j = np.array([b.j for b in g.bonds], dtype=np.int64) + base
        srcs += [i, j]
        dsts += [j, i]
        efs += [ef, ef]
        offsets.append(base + g.n_atoms)
    x = np.concatenate(xs)
    src = np.concatenate(srcs)
    dst = np.concatenate(dsts)
    ef = np.concatenate(efs) if efs else np.zeros((0, len(EDGE_FEATURES)))
    n = x.shape[0]
    indeg = np.bincount(dst, minlength=n) if dst.size else np.zeros(n, dtype=np.int64)
    slots = np.full((n, int(indeg.max()) if n else 0), -1, dtype=np.int64)
    fill = np.zeros(n, dtype=np.int64)
    for e, d in enumerate(dst):
        slots[d, fill[d]] = e
        fill[d] += 1
    return GraphBatch(x, ef.reshape(-1, len(EDGE_FEATURES)), src, dst, slots, np.array(offsets))


@dataclass(frozen=True)
class GraphDiscriminator:
    params: dict

    def __post_init__(self):
        p = {k: np.array(self.params[k], dtype=np.float64) for k in PARAM_NAMES}
        d0 = len(NODE_FEATURES)
        h = p["w1"].shape[1]
        expected = {
            "eps": (2,),
            "we1": (len(EDGE_FEATURES), d0),
            "w1": (d0, h),
            "b1": (h,),
            "we2": (len(EDGE_FEATURES), h),
            "w2": (h, h),
            "b2": (h,),
            "v1": (h, h),
            "c1": (h,),
            "v2": (h, 1),
            "c2": (1,),
        }
        for k, shape in expected.items():
            if p[k].shape != shape:
                raise ShapeMismatch(f"{k} has shape {p[k].shape}, expected {shape}")
            p[k].setflags(write=False)
        object.__setattr__(self, "params", p)

    @property
    def hidden(self) -> int:
        return self.params["w1"].shape[1]

    def param_list(self) -> list[np.ndarray]:
        return [self.params[k] for k in PARAM_NAMES]

    def with_param_list(self, values) -> "GraphDiscriminator":
        return GraphDiscriminator(dict(zip(PARAM_NAMES, values)))


def init_discriminator(seed: int, hidden: int = 32) -> GraphDiscriminator:
    rng = np.random.default_rng(seed)
    d0 = len(NODE_FEATURES)
    de = len(EDGE_FEATURES)

    def u(n_in, shape):
        lim = 1.0 / np.sqrt(n_in)
        return rng.uniform(-lim, lim, shape)

    return GraphDiscriminator(
        {
            "eps": np.zeros(2),
            "we1": u(de, (de, d0)),
            "w1": u(d0, (d0, hidden)),
            "b1": np.zeros(hidden),
            "we2": u(de, (de, hidden)),
            "w2": u(hidden, (hidden, hidden)),
            "b2": np.zeros(hidden),
            "v1": u(hidden, (hidden, hidden)),
            "c1": np.zeros(hidden),
            "v2": u(hidden, (hidden, 1)),
            "c2": np.zeros(1),
        }
    )


def zero_discriminator(hidden: int = 4, head_bias: float = 0.0) -> GraphDiscriminator:
    d = init_discriminator(0, hidden)
    p = {k: np.zeros_like(v) for k, v in d.params.items()}
    p["c2"] = np.array([head_bias])
    return GraphDiscriminator(p)


def _sorted_sum(m: np.ndarray, axis: int) -> np.ndarray:
    return np.sort(m, axis=axis).sum(axis=axis)


def _mp_layer(x, eps, we, w, b, batch: GraphBatch):
    pre = x[batch.src] + batch.ef @ we
    msg = np.maximum(pre, 0.0)
    n, d = x.shape
    if batch.slots.shape[1]:
        padded = np.where(batch.slots[:, :, None] >= 0, msg[np.maximum(batch.slots, 0)], 0.0)
        agg = _sorted_sum(padded, axis=1)
    else:
        agg = np.zeros((n, d))
    m = (1.0 + eps) * x + agg
    a = m @ w + b
    mu = a.mean(axis=1, keepdims=True)
    sd = np.sqrt(a.var(axis=1, keepdims=True) + LN_EPS)
    y = (a - mu) / sd
    out = np.maximum(y, 0.0)
    return out, (x, pre, m, y, sd)


def _mp_layer_back(dout, cache, eps, we, w, batch: GraphBatch):
    x, pre, m, y, sd = cache
    dy = dout * (y > 0)
    da = (dy - dy.mean(axis=1, keepdims=True) - y * (dy * y).mean(axis=1, keepdims=True)) / sd
    dw = m.T @ da
    db = da.sum(axis=0)
    dm = da @ w.T
    deps = np.array([np.sum(dm * x)])
    dx = (1.0 + eps) * dm
    dmsg = dm[batch.dst] * (pre > 0)
    np.add.at(dx, batch.src, dmsg)
    dwe = batch.ef.T @ dmsg
    return dx, deps, dwe, dw, db


def _forward(disc: GraphDiscriminator, batch: GraphBatch):
    p = disc.params
    h1, c1 = _mp_layer(batch.x, p["eps"][0], p["we1"], p["w1"], p["b1"], batch)
    h2, c2 = _mp_layer(h1, p["eps"][1], p["we2"], p["w2"], p["b2"], batch)
    off = batch.offsets
    pooled = np.stack(
        [_sorted_sum(h2[off[k] : off[k + 1]], axis=0) / (off[k + 1] - off[k]) for k in range(batch.n_graphs)]
    )
    qa = pooled @ p["v1"] + p["c1"]
    q = np.maximum(qa, 0.0)
    logits = (q @ p["v2"] + p["c2"])[:, 0]
    return logits, (c1, c2, h2, pooled, qa, q)


def discriminator_logits(disc: GraphDiscriminator, graphs) -> np.ndarray:
    batch = graphs if isinstance(graphs, GraphBatch) else make_batch(graphs)
    return _forward(disc, batch)[0]


def discriminator_forward(g: MolGraph, disc: GraphDiscriminator) -> float:
    """Logit that ``g`` is a reference molecule."""
    if g.n_atoms == 0:
        raise EmptyGraph("graph has no atoms")
    return float(discriminator_logits(disc, [g])[0])


def discriminator_grads(disc: GraphDiscriminator, batch: GraphBatch, dlogits: np.ndarray) -> list[np.ndarray]:
    """Parameter gradients of ``sum(dlogits * logits)``, aligned with ``param_list``."""
    p = disc.params
    _, (c1, c2, h2, pooled, qa, q) = _forward(disc, batch)
    dl = np.asarray(dlogits, dtype=np.float64)[:, None]
    g = {"v2": q.T @ dl, "c2": dl.sum(axis=0)}
    dqa = (dl @ p["v2"].T) * (qa > 0)
    g["v1"] = pooled.T @ dqa
    g["c1"] = dqa.sum(axis=0)
    dpooled = dqa @ p["v1"].T
    off = batch.offsets
    sizes = np.diff(off)
    graph_of = np.repeat(np.arange(batch.n_graphs), sizes)
    dh2 = dpooled[graph_of] / sizes[graph_of][:, None]
    dh1, de2, g["we2"], g["w2"], g["b2"] = _mp_layer_back(dh2, c2, p["eps"][1], p["we2"], p["w2"], batch)
    _, de1, g["we1"], g["w1"], g["b1"] = _mp_layer_back(dh1, c1, p["eps"][0], p["we1"], p["w1"], batch)
    g["eps"] = np.concatenate([de1, de2])
    return [g[k] for k in PARAM_NAMES]


def bce_with_logits(logits, targets, clip: float = 10.0):
    """Mean BCE on clipped logits and its gradient; clipped entries get zero gradient."""
    z = np.asarray(logits, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    zc = np.clip(z, -clip, clip)
    loss = np.mean(np.logaddexp(0.0, zc) - t * zc)
    sig = 0.5 * (1.0 + np.tanh(0.5 * zc))
    grad = (sig - t) * (np.abs(z) < clip) / z.size
    return float(loss), grad


def discriminator_train_step(
    disc: GraphDiscriminator,
    real_batch,
    fake_batch,
    lr: float,
    label_smoothing: float = 0.1,
    logit_clip: float = 10.0,
    ema: EMAState | None = None,
    opt_state: AdamState | None = None,
):
    """One step of smoothed BCE on real versus generated graphs.

    Returns ``(disc, loss, ema, opt_state)``; the loss is the pre-step value
    and the EMA (when given) is updated after the step.
    """
    real_batch = list(real_batch)
    fake_batch = list(fake_batch)
    if not real_batch or not fake_batch:
        raise EmptyBatch("both real and generated batches must be non-empty")
    batch = make_batch(real_batch + fake_batch)
    targets = np.concatenate(
        [np.full(len(real_batch), 1.0 - label_smoothing), np.full(len(fake_batch), label_smoothing)]
    )
    logits = _forward(disc, batch)[0]
    loss, dlogits = bce_with_logits(logits, targets, logit_clip)
    grads = discriminator_grads(disc, batch, dlogits)
    params, opt_state = apply_step(disc.param_list(), grads, lr, opt_state)
    disc = disc.with_param_list(params)
    if ema is not None:
        ema = ema_update(ema, disc.param_list())
    return disc, loss, ema, opt_state


def teacher(ema: EMAState) -> GraphDiscriminator:
    return GraphDiscriminator(dict(zip(PARAM_NAMES, ema.shadow)))
