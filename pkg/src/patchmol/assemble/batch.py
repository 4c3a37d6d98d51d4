"""Batch assembly from a tensor file to SMILES text and a score table."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from patchmol.assemble.config import AggregatorConfig
from patchmol.assemble.pipeline import assemble_detailed
from patchmol.blob import atomic_write_text, load_blob, save_blob
from patchmol.chem.canon import canonical_smiles
from patchmol.errors import GenerationFailure, ShapeMismatch

SCORE_COLUMNS = ("index", "smiles", "route", "score", "failed", "fallback")


@dataclass(frozen=True)
class BatchRecord:
    index: int
    smiles: str | None
    route: str
    score: float | None
    fallback: bool

    @property
    def failed(self) -> bool:
        return self.smiles is None


def assemble_batch(patches: np.ndarray, cfg: AggregatorConfig | None = None) -> list[BatchRecord]:
    """Assemble every patch of a ``(B, n_nodes, f_node)`` array; failures are recorded, not raised."""
    cfg = cfg or AggregatorConfig()
    patches = np.asarray(patches, dtype=np.float64)
    if patches.ndim != 3:
        raise ShapeMismatch(f"expected (B, n_nodes, f_node), got {patches.shape}")
    out = []
    for k, h in enumerate(patches):
        try:
            r = assemble_detailed(h, cfg)
        except GenerationFailure:
            out.append(BatchRecord(k, None, "", None, False))
            continue
        out.append(BatchRecord(k, canonical_smiles(r.mol), r.route, r.score, r.fallback))
    return out


def records_csv(records: list[BatchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCORE_COLUMNS)
    for r in records:
        w.writerow(
            [
                r.index,
                r.smiles or "",
                r.route,
                "" if r.score is None else repr(float(r.score)),
                int(r.failed),
                int(r.fallback),
            ]
        )
    return buf.getvalue()


def records_smiles(records: list[BatchRecord]) -> str:
    return "".join(f"{r.smiles}\n" for r in records if not r.failed)


def save_patches(path: str | Path, patches: np.ndarray, meta: dict | None = None) -> None:
    save_blob(path, {"patches": np.asarray(patches, dtype=np.float64)}, meta or {})


def load_patches(path: str | Path) -> np.ndarray:
    tensors, _ = load_blob(path)
    if "patches" not in tensors:
        raise ShapeMismatch("tensor file has no 'patches' entry")
    return tensors["patches"]


def run_batch_file(src: str | Path, smiles_out: str | Path, csv_out: str | Path, cfg=None):
    records = assemble_batch(load_patches(src), cfg)
    atomic_write_text(smiles_out, records_smiles(records))
    atomic_write_text(csv_out, records_csv(records))
    return records
