"""Immutable molecular graph types."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from patchmol.chem.elements import Element, element


@dataclass(frozen=True)
class Atom:
    """A heavy atom. Hydrogens are always implicit."""

    symbol: str
    aromatic: bool = False
    implicit_hydrogens: int = 0
    formal_charge: int = 0

    @property
    def element(self) -> Element:
        return element(self.symbol)


@dataclass(frozen=True)
class Bond:
    """Undirected bond with endpoints stored as ``i < j``."""

    i: int
    j: int
    order: int = 1
    aromatic: bool = False
    in_ring: bool = False
    conjugated: bool = False

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"self-loop on atom {self.i}")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)
        if self.order not in (1, 2):
            raise ValueError(f"unsupported bond order {self.order}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.i, self.j)

    def other(self, a: int) -> int:
        return self.j if a == self.i else self.i


@dataclass(frozen=True)
class MolGraph:
    atoms: tuple[Atom, ...] = ()
    bonds: tuple[Bond, ...] = ()
    sanitized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        n = len(self.atoms)
        seen = set()
        for b in self.bonds:
            if b.j >= n:
                raise ValueError(f"bond {b.key} references missing atom")
            if b.key in seen:
                raise ValueError(f"duplicate bond {b.key}")
            seen.add(b.key)

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor indices per atom, ascending."""
        nb: list[list[int]] = [[] for _ in self.atoms]
        for b in self.bonds:
            nb[b.i].append(b.j)
            nb[b.j].append(b.i)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Bond indices incident to each atom."""
        inc: list[list[int]] = [[] for _ in self.atoms]
        for k, b in enumerate(self.bonds):
            inc[b.i].append(k)
            inc[b.j].append(k)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def bond_index(self) -> dict[tuple[int, int], int]:
        return {b.key: k for k, b in enumerate(self.bonds)}

    def bond_between(self, a: int, b: int) -> Bond | None:
        k = self.bond_index.get((a, b) if a < b else (b, a))
        return None if k is None else self.bonds[k]

    def degree(self, a: int) -> int:
        return len(self.incident[a])

    def explicit_valence(self, a: int) -> int:
        """Bond-order sum, counting each aromatic bond as 1 plus one shared pi electron."""
        total = 0
        n_arom = 0
        for k in self.incident[a]:
            b = self.bonds[k]
            if b.aromatic:
                n_arom += 1
            else:
                total += b.order
        if n_arom:
            total += n_arom + 1
        return total

    def total_hydrogens(self, a: int) -> int:
        return self.atoms[a].implicit_hydrogens

    def with_changes(self, atoms=None, bonds=None, sanitized=False) -> "MolGraph":
        return MolGraph(
            atoms=self.atoms if atoms is None else tuple(atoms),
            bonds=self.bonds if bonds is None else tuple(bonds),
            sanitized=sanitized,
        )

    def subgraph(self, keep: list[int] | tuple[int, ...]) -> "MolGraph":
        """Induced subgraph on ``keep`` with indices re-densified in ascending order."""
        keep = sorted(keep)
        remap = {old: new for new, old in enumerate(keep)}
        atoms = [self.atoms[k] for k in keep]
        bonds = [
            replace(b, i=remap[b.i], j=remap[b.j])
            for b in self.bonds
            if b.i in remap and b.j in remap
        ]
        return MolGraph(atoms, bonds, sanitized=False)

    def permuted(self, perm) -> "MolGraph":
        """Relabel atoms so that old index ``k`` becomes ``perm[k]``."""
        n = self.n_atoms
        atoms = [None] * n
        for old, new in enumerate(perm):
            atoms[new] = self.atoms[old]
        bonds = [replace(b, i=perm[b.i], j=perm[b.j]) for b in self.bonds]
        bonds.sort(key=lambda b: b.key)
        return MolGraph(atoms, bonds, sanitized=self.sanitized)

    def components(self) -> list[list[int]]:
        """Connected components as sorted atom lists, ordered by smallest member."""
        seen = [False] * self.n_atoms
        comps = []
        for s in range(self.n_atoms):
            if seen[s]:
                continue
            stack = [s]
            seen[s] = True
            comp = []
            while stack:
                a = stack.pop()
                comp.append(a)
                for nb in self.neighbors[a]:
                    if not seen[nb]:
                        seen[nb] = True
                        stack.append(nb)
            comps.append(sorted(comp))
        return comps


def from_edges(symbols, edges, aromatic_atoms=()) -> MolGraph:
    """Build an unsanitized graph from element symbols and (i, j[, order]) tuples."""
    arom = set(aromatic_atoms)
    atoms = [Atom(s, aromatic=k in arom) for k, s in enumerate(symbols)]
    bonds = []
    for e in edges:
        i, j = e[0], e[1]
        order = e[2] if len(e) > 2 else 1
        bonds.append(Bond(i, j, order=order))
    return MolGraph(atoms, bonds)
