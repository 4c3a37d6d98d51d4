"""Aromatic-ring and scaffold summaries of a molecule set."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from patchmol.chem.canon import canonical_smiles
from patchmol.chem.descriptors import compute_descriptors
from patchmol.chem.scaffold import murcko_scaffold


@dataclass(frozen=True)
class AromaticAudit:
    pct_with_aromatic: float
    mean_aromatic_rings: float
    mean_rings: float
    mean_aromatic_atoms: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def aromatic_ring_audit(mols, descs=None) -> AromaticAudit:
    """Share of molecules with an aromatic ring (percent) and per-molecule ring means."""
    mols = list(mols)
    descs = list(descs) if descs is not None else [compute_descriptors(m) for m in mols]
    n = len(descs)
    if n == 0:
        return AromaticAudit(0.0, 0.0, 0.0, 0.0, 0)
    return AromaticAudit(
        pct_with_aromatic=100.0 * sum(d.n_aromatic_rings >= 1 for d in descs) / n,
        mean_aromatic_rings=sum(d.n_aromatic_rings for d in descs) / n,
        mean_rings=sum(d.n_rings for d in descs) / n,
        mean_aromatic_atoms=sum(d.n_aromatic_atoms for d in descs) / n,
        n=n,
    )


def scaffold_counts(mols) -> dict:
    """Distinct Murcko scaffolds; acyclic molecules share the empty scaffold."""
    scafs = [canonical_smiles(murcko_scaffold(m)) for m in mols]
    return {"n_scaffolds": len(set(scafs)), "n_acyclic": sum(1 for s in scafs if s == "")}
