"""Backtracking substructure search for small query graphs."""

from __future__ import annotations

from patchmol.chem.graph import MolGraph


def _bond_kind(b) -> int:
    return 3 if b.aromatic else b.order


def has_substructure(g: MolGraph, query: MolGraph) -> bool:
    """True if ``query`` maps injectively into ``g`` preserving atoms and bond kinds."""
    nq = query.n_atoms
    if nq == 0:
        return True
    if nq > g.n_atoms:
        return False
    # order query atoms so each one after the first touches an earlier one
    order = []
    seen = set()
    for root in range(nq):
        if root in seen:
            continue
        queue = [root]
        seen.add(root)
        while queue:
            a = queue.pop(0)
            order.append(a)
            for nb in query.neighbors[a]:
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def atom_ok(qa: int, ga: int) -> bool:
        q, t = query.atoms[qa], g.atoms[ga]
        return q.symbol == t.symbol and q.aromatic == t.aromatic and query.degree(qa) <= g.degree(ga)

    def extend(pos: int) -> bool:
        if pos == nq:
            return True
        qa = order[pos]
        for ga in range(g.n_atoms):
            if ga in used or not atom_ok(qa, ga):
                continue
            ok = True
            for qn in query.neighbors[qa]:
                if qn in mapping:
                    gb = g.bond_between(ga, mapping[qn])
                    if gb is None or _bond_kind(gb) != _bond_kind(query.bond_between(qa, qn)):
                        ok = False
                        break
            if not ok:
                continue
            mapping[qa] = ga
            used.add(ga)
            if extend(pos + 1):
                return True
            del mapping[qa]
            used.discard(ga)
        return False

    return extend(0)
