"""Canonical atom ranking and canonical SMILES."""

from __future__ import annotations

from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import MolGraph
from patchmol.chem.smiles import write_smiles

# maximum number of tie-break leaves explored before committing greedily
LEAF_BUDGET = 512


def _dense(keys) -> list[int]:
    uniq = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [uniq[k] for k in keys]


def _bond_code(b) -> int:
    return 3 if b.aromatic else b.order


def _refine(g: MolGraph, ranks: list[int], nbr_codes) -> list[int]:
    n_classes = len(set(ranks))
    while True:
        keys = [
            (ranks[a], tuple(sorted((code, ranks[nb]) for code, nb in nbr_codes[a])))
            for a in range(g.n_atoms)
        ]
        new = _dense(keys)
        n_new = len(set(new))
        if n_new == n_classes:
            return new
        ranks, n_classes = new, n_new


def atom_invariants(g: MolGraph) -> list[tuple]:
    """Initial per-atom invariant: element, degree, hydrogens, aromatic, ring membership."""
    in_ring = [False] * g.n_atoms
    for b in g.bonds:
        if b.in_ring:
            in_ring[b.i] = in_ring[b.j] = True
    return [
        (
            g.degree(a),
            ELEMENTS[at.symbol].atomic_number,
            at.implicit_hydrogens,
            int(at.aromatic),
            int(in_ring[a]),
        )
        for a, at in enumerate(g.atoms)
    ]


def canonical_ranks(g: MolGraph) -> list[int]:
    """Permutation-invariant total order of atoms (ranks 0..n-1)."""
    return _canonical(g)[1]


def canonical_smiles(g: MolGraph) -> str:
    """Canonical SMILES of a sanitized graph.

    Ranks come from iterated neighbourhood refinement. Remaining symmetry
    ties are broken by individualizing each member of the first tied class
    in turn and keeping the lexicographically smallest output string, so the
    result does not depend on input atom order.
    """
    return _canonical(g)[0]


def _canonical(g: MolGraph) -> tuple[str, list[int]]:
    n = g.n_atoms
    if n == 0:
        return "", []
    nbr_codes = [
        [(_bond_code(g.bonds[k]), g.bonds[k].other(a)) for k in g.incident[a]]
        for a in range(n)
    ]
    start = _refine(g, _dense(atom_invariants(g)), nbr_codes)
    budget = [LEAF_BUDGET]
    best: list = [None, None]

    def search(ranks: list[int]):
        counts: dict[int, int] = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        tied = [r for r, c in counts.items() if c > 1]
        if not tied:
            budget[0] -= 1
            s = write_smiles(g, ranks)
            if best[0] is None or s < best[0]:
                best[0], best[1] = s, ranks
            return
        target = min(tied)
        members = [a for a in range(n) if ranks[a] == target]
        for k, a in enumerate(members):
            if k > 0 and budget[0] <= 0:
                break
            split = [2 * r + (1 if (r == target and b != a) else 0) for b, r in enumerate(ranks)]
            search(_refine(g, _dense(split), nbr_codes))

    search(start)
    return best[0], best[1]
