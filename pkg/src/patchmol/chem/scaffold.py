"""Bemis-Murcko scaffolds."""

from __future__ import annotations

from patchmol.chem.graph import MolGraph
from patchmol.chem.sanitize import sanitize


def murcko_scaffold(g: MolGraph) -> MolGraph:
    """Strip terminal non-ring atoms until a fixed point.

    Acyclic molecules reduce to the empty graph.
    """
    in_ring = [False] * g.n_atoms
    for b in g.bonds:
        if b.in_ring:
            in_ring[b.i] = in_ring[b.j] = True
    alive = [True] * g.n_atoms
    deg = [g.degree(a) for a in range(g.n_atoms)]
    queue = [a for a in range(g.n_atoms) if not in_ring[a] and deg[a] <= 1]
    while queue:
        a = queue.pop()
        if not alive[a]:
            continue
        alive[a] = False
        for nb in g.neighbors[a]:
            if alive[nb]:
                deg[nb] -= 1
                if not in_ring[nb] and deg[nb] <= 1:
                    queue.append(nb)
    keep = [a for a in range(g.n_atoms) if alive[a]]
    if not keep:
        return sanitize(MolGraph())
    return sanitize(g.subgraph(keep))
