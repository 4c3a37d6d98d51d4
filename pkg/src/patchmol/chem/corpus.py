"""Deterministic generator of small QM9-like reference molecules.

Used for tests and offline demos when no reference corpus is supplied.
Molecules have at most ``max_atoms`` heavy atoms drawn from C/N/O/F and
roughly follow QM9's element mix, with occasional aromatic rings.
"""

from __future__ import annotations

import numpy as np

from patchmol.chem.canon import canonical_smiles
from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import Atom, Bond, MolGraph
from patchmol.chem.sanitize import sanitize
from patchmol.errors import PatchmolError

_SEEDS = ("c1ccccc1", "c1ccncc1", "C1CCCCC1", "C1CCCC1", "C1CC1", "C1CCC1", "C1CCOC1", "C1CCNC1")
_ELEMENTS = ("C", "N", "O", "F")
_ELEMENT_P = np.array([0.70, 0.12, 0.16, 0.02])


def _grow(rng: np.random.Generator, max_atoms: int) -> MolGraph | None:
    from patchmol.chem.smiles import parse_smiles

    if rng.random() < 0.35:
        seed = _SEEDS[rng.integers(len(_SEEDS))]
        g = sanitize(parse_smiles(seed))
        atoms = list(g.atoms)
        bonds = {b.key: b for b in g.bonds}
    else:
        atoms = [Atom("C")]
        bonds = {}
    target = int(rng.integers(max(2, len(atoms)), max_atoms + 1))

    def valence(a: int) -> int:
        v = 0
        n_ar = 0
        for b in bonds.values():
            if a in (b.i, b.j):
                if b.aromatic:
                    n_ar += 1
                else:
                    v += b.order
        return v + (n_ar + 1 if n_ar else 0)

    def free(a: int) -> int:
        return ELEMENTS[atoms[a].symbol].max_valence - valence(a)

    while len(atoms) < target:
        sym = _ELEMENTS[rng.choice(4, p=_ELEMENT_P)]
        hosts = [a for a in range(len(atoms)) if free(a) >= 1]
        if not hosts:
            break
        host = hosts[rng.integers(len(hosts))]
        atoms.append(Atom(sym))
        new = len(atoms) - 1
        order = 1
        if sym != "F" and free(host) >= 2 and not atoms[host].aromatic and rng.random() < 0.15:
            order = 2
        bonds[(host, new)] = Bond(host, new, order=order)
    # optional ring closure between two atoms 2-5 bonds apart
    if len(atoms) >= 4 and rng.random() < 0.3:
        cands = [
            (a, b)
            for a in range(len(atoms))
            for b in range(a + 1, len(atoms))
            if (a, b) not in bonds and free(a) >= 1 and free(b) >= 1
            and not atoms[a].aromatic and not atoms[b].aromatic
        ]
        if cands:
            a, b = cands[rng.integers(len(cands))]
            bonds[(a, b)] = Bond(a, b)
    try:
        return sanitize(MolGraph(atoms, sorted(bonds.values(), key=lambda b: b.key)))
    except (PatchmolError, ValueError):
        return None


def toy_corpus(n: int, seed: int = 0, max_atoms: int = 9) -> list[str]:
    """``n`` distinct canonical SMILES of small random molecules."""
    rng = np.random.default_rng(seed)
    seen: dict[str, None] = {}
    attempts = 0
    while len(seen) < n:
        attempts += 1
        if attempts > 200 * n + 1000:
            raise RuntimeError("toy corpus generator failed to find enough distinct molecules")
        g = _grow(rng, max_atoms)
        if g is None or g.n_atoms < 2:
            continue
        s = canonical_smiles(g)
        seen.setdefault(s, None)
    return list(seen)
