"""One interface over the circuit and classical patch heads, plus checkpoint IO."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from patchmol.blob import decode_blob, encode_blob, load_blob, save_blob
from patchmol.errors import ShapeMismatch
from patchmol.qpatch.classical import ClassicalParams, classical_patches
from patchmol.qpatch.config import QuantumConfig, QuantumParams
from patchmol.qpatch.generator import generate_patches


@dataclass(frozen=True)
class PatchHead:
    """Maps latent batches ``(B, latent_dim)`` to patches ``(B, n_nodes, f_node)``.

    ``kind`` is ``"quantum"`` or ``"classical"``; callers never need to know which.
    """

    kind: str
    params: object

    @property
    def config(self) -> QuantumConfig:
        return self.params.config

    def patches(self, z: np.ndarray) -> np.ndarray:
        if self.kind == "quantum":
            return generate_patches(z, self.params)
        return classical_patches(z, self.params)

    def to_bytes(self) -> bytes:
        return encode_blob(
            self.params.tensors(), {"kind": self.kind, "config": self.config.to_dict()}
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "PatchHead":
        tensors, meta = decode_blob(data)
        return _from_parts(tensors, meta)

    def save(self, path: str | Path) -> None:
        save_blob(path, self.params.tensors(), {"kind": self.kind, "config": self.config.to_dict()})

    @classmethod
    def load(cls, path: str | Path) -> "PatchHead":
        tensors, meta = load_blob(path)
        return _from_parts(tensors, meta)


def _from_parts(tensors: dict, meta: dict) -> PatchHead:
    try:
        cfg = QuantumConfig(**meta["config"])
        kind = meta["kind"]
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"checkpoint header lacks a valid config: {exc}") from exc
    if kind == "quantum":
        return PatchHead(kind, QuantumParams(cfg, **tensors))
    if kind == "classical":
        return PatchHead(kind, ClassicalParams(cfg, tensors))
    raise ShapeMismatch(f"unknown head kind {kind!r}")


def quantum_head(params: QuantumParams) -> PatchHead:
    return PatchHead("quantum", params)


def classical_head(params: ClassicalParams) -> PatchHead:
    return PatchHead("classical", params)
