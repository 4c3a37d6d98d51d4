"""On-disk checkpoints: one directory per epoch, tensor blobs plus a JSON sidecar.

Layout of an epoch directory::

    head.pmtb           frozen patch head
    conditioner.pmtb    conditioner network and its standardization stats
    critic.pmtb         latent critic
    discriminator.pmtb  graph discriminator (live weights and EMA shadow)
    meta.json           CheckpointMeta
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from patchmol.assemble.config import AggregatorConfig
from patchmol.blob import atomic_write_text, load_blob, save_blob
from patchmol.errors import ShapeMismatch
from patchmol.generate import Generator
from patchmol.nets.conditioner import Conditioner
from patchmol.nets.dense import DenseNet, Layer
from patchmol.nets.discriminator import PARAM_NAMES, GraphDiscriminator
from patchmol.nets.ema import EMAState
from patchmol.qpatch.heads import PatchHead
from patchmol.train.reward import CheckpointMeta

HEAD_FILE = "head.pmtb"
CONDITIONER_FILE = "conditioner.pmtb"
CRITIC_FILE = "critic.pmtb"
DISCRIMINATOR_FILE = "discriminator.pmtb"
META_FILE = "meta.json"
BEST_MARKER = "best.json"


def dense_to_parts(net: DenseNet, prefix: str = "") -> tuple[dict, dict]:
    tensors = {}
    for k, layer in enumerate(net.layers):
        tensors[f"{prefix}w{k}"] = layer.w
        tensors[f"{prefix}b{k}"] = layer.b
    meta = {"activations": [l.activation for l in net.layers], "dropout_rate": net.dropout_rate}
    return tensors, meta


def dense_from_parts(tensors: dict, meta: dict, prefix: str = "") -> DenseNet:
    try:
        layers = [
            Layer(tensors[f"{prefix}w{k}"], tensors[f"{prefix}b{k}"], act)
            for k, act in enumerate(meta["activations"])
        ]
        return DenseNet(tuple(layers), float(meta["dropout_rate"]))
    except KeyError as exc:
        raise ShapeMismatch(f"network checkpoint lacks {exc}") from exc


def save_conditioner(path, cond: Conditioner) -> None:
    tensors, meta = dense_to_parts(cond.net, "net_")
    tensors.update(x_mean=cond.x_mean, x_std=cond.x_std, z_mean=cond.z_mean, z_std=cond.z_std)
    meta["axes"] = list(cond.axes)
    save_blob(path, tensors, meta)


def load_conditioner(path) -> Conditioner:
    tensors, meta = load_blob(path)
    net = dense_from_parts(tensors, meta, "net_")
    return Conditioner(net, tensors["x_mean"], tensors["x_std"], tuple(meta["axes"]),
                       tensors["z_mean"], tensors["z_std"])


def save_dense(path, net: DenseNet) -> None:
    tensors, meta = dense_to_parts(net)
    save_blob(path, tensors, meta)


def load_dense(path) -> DenseNet:
    tensors, meta = load_blob(path)
    return dense_from_parts(tensors, meta)


def save_discriminator(path, disc: GraphDiscriminator, ema: EMAState | None = None) -> None:
    tensors = dict(disc.params)
    meta = {}
    if ema is not None:
        tensors.update({f"ema_{k}": v for k, v in zip(PARAM_NAMES, ema.shadow)})
        meta["ema_decay"] = ema.decay
    save_blob(path, tensors, meta)


def load_discriminator(path) -> tuple[GraphDiscriminator, EMAState | None]:
    tensors, meta = load_blob(path)
    disc = GraphDiscriminator({k: tensors[k] for k in PARAM_NAMES})
    ema = None
    if "ema_decay" in meta:
        ema = EMAState(tuple(tensors[f"ema_{k}"] for k in PARAM_NAMES), float(meta["ema_decay"]))
    return disc, ema


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def save_checkpoint(directory, state, meta: CheckpointMeta) -> Path:
    """Write every network of a training state into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    state.generator.head.save(d / HEAD_FILE)
    save_conditioner(d / CONDITIONER_FILE, state.generator.conditioner)
    save_dense(d / CRITIC_FILE, state.critic)
    save_discriminator(d / DISCRIMINATOR_FILE, state.disc, state.ema)
    atomic_write_text(d / META_FILE, _json(meta.to_dict()))
    return d


@dataclass(frozen=True)
class LoadedCheckpoint:
    head: PatchHead
    conditioner: Conditioner | None
    meta: CheckpointMeta | None

    def generator(self, agg: AggregatorConfig) -> Generator:
        if self.conditioner is None:
            raise FileNotFoundError("checkpoint has no conditioner")
        return Generator(self.conditioner, self.head, agg)


def resolve_checkpoint(path) -> Path:
    """A checkpoint directory, or the directory named by a best-checkpoint marker."""
    p = Path(path)
    if p.is_dir() and (p / BEST_MARKER).exists() and not (p / HEAD_FILE).exists():
        p = p / json.loads((p / BEST_MARKER).read_text())["directory"]
    elif p.is_file() and p.name == BEST_MARKER:
        p = p.parent / json.loads(p.read_text())["directory"]
    if not (p / HEAD_FILE).exists():
        raise FileNotFoundError(f"no patch head under {p}")
    return p


def load_checkpoint(path) -> LoadedCheckpoint:
    d = resolve_checkpoint(path)
    head = PatchHead.load(d / HEAD_FILE)
    cond = load_conditioner(d / CONDITIONER_FILE) if (d / CONDITIONER_FILE).exists() else None
    meta = None
    if (d / META_FILE).exists():
        meta = CheckpointMeta(**json.loads((d / META_FILE).read_text()))
    return LoadedCheckpoint(head, cond, meta)


def write_best_marker(root, directory_name: str, meta: CheckpointMeta) -> None:
    atomic_write_text(Path(root) / BEST_MARKER, _json({"directory": directory_name, **meta.to_dict()}))


def latent_prior_sample(ckpt: LoadedCheckpoint, n: int, rng: np.random.Generator) -> np.ndarray:
    """Random latents: the conditioner's latent prior when present, else standard normal."""
    dim = ckpt.head.config.latent_dim
    if ckpt.conditioner is None:
        return rng.standard_normal((n, dim))
    c = ckpt.conditioner
    return c.z_mean + c.z_std * rng.standard_normal((n, dim))
