"""Descriptor-conditioned generation: conditioner, patch head and assembly chained."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from patchmol.assemble.config import AggregatorConfig
from patchmol.assemble.pipeline import assemble_detailed
from patchmol.chem.canon import canonical_smiles
from patchmol.chem.descriptors import Descriptors, compute_descriptors
from patchmol.chem.graph import MolGraph
from patchmol.errors import GenerationFailure
from patchmol.nets.conditioner import Conditioner, conditioner_forward
from patchmol.qpatch.heads import PatchHead

DESCRIPTOR_FEATURES = ("qed", "logp", "sa", "tpsa", "fraction_sp3", "n_heavy_atoms")
PROPERTY_COLUMNS = ("qed", "sa", "logp")


def descriptor_features(d: Descriptors) -> np.ndarray:
    return np.array([float(getattr(d, f)) for f in DESCRIPTOR_FEATURES])


def feature_matrix(descs) -> np.ndarray:
    return np.array([descriptor_features(d) for d in descs]).reshape(-1, len(DESCRIPTOR_FEATURES))


@dataclass(frozen=True)
class Decoded:
    """One generation attempt; ``mol`` is None when assembly failed."""

    mol: MolGraph | None
    smiles: str | None
    descriptors: Descriptors | None
    route: str = ""
    score: float | None = None

    @property
    def ok(self) -> bool:
        return self.mol is not None


FAILED = Decoded(None, None, None)


def decode_patches(patches: np.ndarray, agg: AggregatorConfig) -> list[Decoded]:
    out = []
    for h in patches:
        try:
            r = assemble_detailed(h, agg)
        except GenerationFailure:
            out.append(FAILED)
            continue
        out.append(Decoded(r.mol, canonical_smiles(r.mol), r.descriptors, r.route, r.score))
    return out


def decode_latents(head: PatchHead, z: np.ndarray, agg: AggregatorConfig) -> list[Decoded]:
    return decode_patches(head.patches(z), agg)


@dataclass(frozen=True)
class Generator:
    conditioner: Conditioner
    head: PatchHead
    agg: AggregatorConfig

    def latents(self, x_raw: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Full latents for raw descriptor rows; free axes come from ``rng``."""
        x = self.conditioner.standardize(np.atleast_2d(x_raw))
        return self.conditioner.full_latent(conditioner_forward(x, self.conditioner), rng)

    def generate(self, x_raw: np.ndarray, rng: np.random.Generator):
        z = self.latents(x_raw, rng)
        return z, decode_latents(self.head, z, self.agg)


def jitter_descriptors(x: np.ndarray, iqr: np.ndarray, rng: np.random.Generator, scale: float = 0.05):
    """Gaussian jitter with per-column standard deviation ``scale * IQR``."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    return x + rng.standard_normal(x.shape) * (scale * np.asarray(iqr))


def column_iqr(x: np.ndarray) -> np.ndarray:
    q75, q25 = np.percentile(np.asarray(x, dtype=np.float64), [75, 25], axis=0)
    return q75 - q25


def quantile_grid(x: np.ndarray, n: int, seed: int) -> np.ndarray:
    """``n`` descriptor rows from a seeded Latin grid over per-column quantiles."""
    x = np.asarray(x, dtype=np.float64)
    rng = np.random.default_rng(seed)
    levels = (np.arange(n) + 0.5) / n
    cols = [np.quantile(x[:, j], levels[rng.permutation(n)]) for j in range(x.shape[1])]
    return np.stack(cols, axis=1)
