"""Validity, uniqueness and novelty under one canonicalisation."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from patchmol.chem.io import canonical_or_none


@dataclass(frozen=True)
class VUN:
    validity: float
    uniqueness: float
    novelty: float
    n_generated: int
    n_valid: int
    n_unique: int
    n_novel: int

    def to_dict(self) -> dict:
        return asdict(self)


def canonical_set(smiles) -> set[str]:
    out = set()
    for s in smiles:
        c = canonical_or_none(s)
        if c is not None:
            out.add(c)
    return out


def vun_metrics(gen, ref) -> VUN:
    """Valid fraction of ``gen``; unique share of the valid; novel share of the unique.

    Both lists go through the same parse, sanitize and canonical-SMILES path.
    """
    gen = list(gen)
    canon = [canonical_or_none(s) for s in gen]
    valid = [c for c in canon if c is not None]
    unique = set(valid)
    novel = unique - canonical_set(ref)
    n = len(gen)
    return VUN(
        validity=len(valid) / n if n else 0.0,
        uniqueness=len(unique) / len(valid) if valid else 0.0,
        novelty=len(novel) / len(unique) if unique else 0.0,
        n_generated=n,
        n_valid=len(valid),
        n_unique=len(unique),
        n_novel=len(novel),
    )
