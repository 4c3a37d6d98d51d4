"""Validity gate: valence, ring flags, aromaticity, implicit hydrogens."""

from __future__ import annotations

from dataclasses import replace

from patchmol.chem.aromaticity import perceive_aromaticity
from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import MolGraph
from patchmol.chem.rings import bridges, perceive_rings
from patchmol.errors import AromaticityError, ValenceError


def _conjugation(g: MolGraph) -> list[bool]:
    unsat = [False] * g.n_atoms
    for b in g.bonds:
        if b.aromatic or b.order == 2:
            unsat[b.i] = unsat[b.j] = True
    conj = [False] * g.n_bonds
    for k, b in enumerate(g.bonds):
        if b.aromatic:
            conj[k] = True
        elif b.order == 1 and unsat[b.i] and unsat[b.j]:
            conj[k] = True
    # a double bond is conjugated when an adjacent single bond is
    for k, b in enumerate(g.bonds):
        if b.order == 2 and not b.aromatic:
            for a in (b.i, b.j):
                if any(conj[m] and g.bonds[m].order == 1 for m in g.incident[a] if m != k):
                    conj[k] = True
    return conj


def sanitize(g: MolGraph) -> MolGraph:
    """Return a sanitized copy of ``g``.

    Raises
    ------
    ValenceError
        If an atom's bond-order sum exceeds its maximum valence.
    AromaticityError
        If an atom flagged aromatic is not in any aromatic ring.
    """
    for k, at in enumerate(g.atoms):
        if at.symbol not in ELEMENTS or at.symbol == "H":
            raise ValueError(f"atom {k}: unsupported heavy-atom symbol {at.symbol!r}")
        if at.formal_charge != 0:
            raise ValueError(f"atom {k}: formal charges are not supported")
    rings = perceive_rings(g)
    flagged = [k for k, at in enumerate(g.atoms) if at.aromatic]
    g = perceive_aromaticity(g, rings)
    for k in flagged:
        if not g.atoms[k].aromatic:
            raise AromaticityError(k)

    atoms = []
    for k, at in enumerate(g.atoms):
        el = ELEMENTS[at.symbol]
        ev = g.explicit_valence(k)
        if ev > el.max_valence:
            raise ValenceError(k, ev, el.max_valence)
        h = max(0, el.default_valence - ev)
        atoms.append(at if at.implicit_hydrogens == h else replace(at, implicit_hydrogens=h))

    ring_free = bridges(g.neighbors)
    conj = _conjugation(g)
    bonds = []
    for k, b in enumerate(g.bonds):
        in_ring = b.key not in ring_free
        if b.in_ring != in_ring or b.conjugated != conj[k]:
            b = replace(b, in_ring=in_ring, conjugated=conj[k])
        bonds.append(b)
    return MolGraph(atoms, bonds, sanitized=True)
