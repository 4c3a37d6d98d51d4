"""Fragment-free synthetic-accessibility proxy on the 1 (easy) to 10 (hard) scale.

The score keeps the structure of the Ertl estimator (size, ring-complexity
and macrocycle penalties, the same final rescaling) but replaces the
fragment-frequency term with a local-complexity term computed from the
graph itself: heteroatom-heteroatom bonds, branching, quaternary carbons
and small strained rings all lower it.
"""

from __future__ import annotations

import math

from patchmol.chem.graph import MolGraph


def _spiro_and_bridgeheads(rings) -> tuple[int, int]:
    sets = [set(r) for r in rings]
    spiro: set[int] = set()
    bridge: set[int] = set()
    for x in range(len(sets)):
        for y in range(x + 1, len(sets)):
            shared = sets[x] & sets[y]
            if len(shared) == 1:
                spiro |= shared
            elif len(shared) >= 3:
                # bridged systems share a path of three or more atoms; its ends are bridgeheads
                r = rings[x]
                k = len(r)
                for pos, a in enumerate(r):
                    if a in shared:
                        prev_in = r[(pos - 1) % k] in shared
                        next_in = r[(pos + 1) % k] in shared
                        if prev_in != next_in:
                            bridge.add(a)
    return len(spiro - bridge), len(bridge)


def sa_proxy(g: MolGraph, rings) -> float:
    n = g.n_atoms
    if n == 0:
        return 1.0
    hetero = {"N", "O", "F"}
    n_bonds = max(1, g.n_bonds)
    het_het = sum(
        1 for b in g.bonds if g.atoms[b.i].symbol in hetero and g.atoms[b.j].symbol in hetero
    )
    branch = sum(1 for a in range(n) if g.degree(a) >= 3)
    quaternary = sum(1 for a in range(n) if g.degree(a) == 4)
    small_ring_atoms = {a for r in rings if len(r) <= 4 for a in r}

    complexity = (
        1.5
        - 4.0 * het_het / n_bonds
        - 1.0 * branch / n
        - 1.0 * quaternary / n
        - 2.0 * len(small_ring_atoms) / n
    )
    size_penalty = n**1.005 - n
    n_spiro, n_bridge = _spiro_and_bridgeheads(rings)
    spiro_penalty = math.log10(n_spiro + 1)
    bridge_penalty = math.log10(n_bridge + 1)
    covered = {e for r in rings for e in zip(r, r[1:] + r[:1])}
    covered |= {(b, a) for a, b in covered}
    macro = any(b.in_ring and (b.i, b.j) not in covered for b in g.bonds)
    macro_penalty = math.log10(2) if macro else 0.0

    raw = complexity - size_penalty - spiro_penalty - bridge_penalty - macro_penalty
    lo, hi = -4.0, 2.5
    score = 11.0 - (raw - lo + 1.0) / (hi - lo) * 9.0
    if score > 8.0:
        score = 8.0 + math.log(score + 1.0 - 9.0)
    return min(10.0, max(1.0, score))
