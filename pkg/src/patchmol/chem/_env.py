"""Per-atom environment summaries used by the descriptor code."""

from __future__ import annotations

from dataclasses import dataclass

from patchmol.chem.graph import MolGraph


@dataclass(frozen=True)
class Nbr:
    index: int
    symbol: str
    aromatic: bool
    hydrogens: int
    degree: int
    bond: str  # "s" single, "d" double, "a" aromatic
    in_ring: bool


@dataclass(frozen=True)
class AtomEnv:
    index: int
    symbol: str
    aromatic: bool
    hydrogens: int
    degree: int
    nbrs: tuple[Nbr, ...]
    in_ring3: bool

    @property
    def total_connections(self) -> int:
        return self.degree + self.hydrogens

    def count(self, bond=None, symbols=None, aromatic=None) -> int:
        n = 0
        for nb in self.nbrs:
            if bond is not None and nb.bond not in bond:
                continue
            if symbols is not None and nb.symbol not in symbols:
                continue
            if aromatic is not None and nb.aromatic != aromatic:
                continue
            n += 1
        return n


def atom_environments(g: MolGraph, rings=None) -> list[AtomEnv]:
    in_ring3 = [False] * g.n_atoms
    if rings is not None:
        for r in rings:
            if len(r) == 3:
                for a in r:
                    in_ring3[a] = True
    out = []
    for a, at in enumerate(g.atoms):
        nbrs = []
        for k in g.incident[a]:
            b = g.bonds[k]
            o = b.other(a)
            ot = g.atoms[o]
            kind = "a" if b.aromatic else ("d" if b.order == 2 else "s")
            nbrs.append(
                Nbr(o, ot.symbol, ot.aromatic, ot.implicit_hydrogens, g.degree(o), kind, b.in_ring)
            )
        out.append(
            AtomEnv(a, at.symbol, at.aromatic, at.implicit_hydrogens, len(nbrs), tuple(nbrs), in_ring3[a])
        )
    return out
