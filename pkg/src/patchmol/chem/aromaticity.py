"""Flag-based aromaticity for C/N six-membered rings.

A six-cycle is aromatic when every member is C or N with heavy degree at
most 3 and the pi-electron count is exactly 6. Each member contributes:

* C with exactly one pi bond (a double bond or an aromatic bond): 1
* N with a pi bond and degree at most 2: 1
* N without a pi bond (lone pair donor): 2

A double bond leaving the ring disqualifies its atom unless that bond
belongs to a ring already found aromatic, which lets fused systems written
in alternating form be recognised ring by ring until a fixed point.
No kekulization is ever performed: aromatic bonds keep order 1 and carry
the aromatic flag.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

from patchmol.chem.graph import MolGraph
from patchmol.chem.rings import perceive_rings, ring_edges


def _contribution(g: MolGraph, a: int, ring_keys: set, arom_keys: set) -> int:
    sym = g.atoms[a].symbol
    doubles = []
    n_arom = 0
    for k in g.incident[a]:
        b = g.bonds[k]
        if b.aromatic:
            n_arom += 1
        elif b.order == 2:
            doubles.append(b.key)
    if len(doubles) > 1:
        return 0
    for key in doubles:
        if key not in ring_keys and key not in arom_keys:
            return 0
    has_pi = bool(doubles) or n_arom > 0
    if sym == "C":
        return 1 if has_pi else 0
    if sym == "N":
        if has_pi:
            return 1 if g.degree(a) <= 2 else 0
        return 2
    return 0


def aromatic_rings(g: MolGraph, rings: Sequence[tuple[int, ...]] | None = None):
    """Six-cycles that pass the aromaticity rule, in ring-list order."""
    if rings is None:
        rings = perceive_rings(g)
    candidates = [
        r
        for r in rings
        if len(r) == 6
        and all(g.atoms[a].symbol in ("C", "N") and g.degree(a) <= 3 for a in r)
    ]
    found: list[tuple[int, ...]] = []
    arom_keys: set[tuple[int, int]] = set()
    pending = list(candidates)
    changed = True
    while changed and pending:
        changed = False
        still = []
        for r in pending:
            keys = set(ring_edges(r))
            total = 0
            for a in r:
                c = _contribution(g, a, keys, arom_keys)
                if c == 0:
                    total = -1
                    break
                total += c
            if total == 6:
                found.append(r)
                arom_keys |= keys
                changed = True
            else:
                still.append(r)
        pending = still
    found.sort()
    return found, arom_keys


def perceive_aromaticity(g: MolGraph, rings=None) -> MolGraph:
    """Recompute aromatic atom and bond flags; all other aromatic flags are cleared."""
    found, arom_keys = aromatic_rings(g, rings)
    arom_atoms = {a for r in found for a in r}
    atoms = [
        at if at.aromatic == (k in arom_atoms) else replace(at, aromatic=k in arom_atoms)
        for k, at in enumerate(g.atoms)
    ]
    bonds = []
    for b in g.bonds:
        if b.key in arom_keys:
            bonds.append(replace(b, aromatic=True, order=1))
        elif b.aromatic:
            bonds.append(replace(b, aromatic=False, order=1))
        else:
            bonds.append(b)
    return MolGraph(atoms, bonds, sanitized=False)
