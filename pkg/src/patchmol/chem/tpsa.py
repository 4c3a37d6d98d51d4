"""Topological polar surface area from Ertl fragment contributions (neutral N, O)."""

from __future__ import annotations

from patchmol.chem._env import AtomEnv, atom_environments
from patchmol.chem.graph import MolGraph
from patchmol.chem.rings import perceive_rings


def _nitrogen(env: AtomEnv) -> float:
    H = env.hydrogens
    heavy = env.degree
    ns = sum(1 for nb in env.nbrs if nb.bond == "s")
    nd = sum(1 for nb in env.nbrs if nb.bond == "d")
    na = sum(1 for nb in env.nbrs if nb.bond == "a")
    if heavy == 1:
        if H == 1 and nd == 1:
            return 23.85
        if H == 2 and ns == 1:
            return 26.02
    elif heavy == 2:
        if H == 0 and ns == 1 and nd == 1:
            return 12.36
        if H == 1 and ns == 2:
            return 21.94 if env.in_ring3 else 12.03
        if H == 0 and na == 2:
            return 12.89
        if H == 1 and na == 2:
            return 15.79
    elif heavy == 3:
        if H == 0 and ns == 3:
            return 3.01 if env.in_ring3 else 3.24
        if H == 0 and ns == 1 and nd == 2:
            return 11.68
        if H == 0 and na == 3:
            return 4.41
        if H == 0 and ns == 1 and na == 2:
            return 4.93
        if H == 0 and nd == 1 and na == 2:
            return 8.39
    return max(0.0, 30.5 - 8.2 * heavy + 1.5 * H)


def _oxygen(env: AtomEnv) -> float:
    H = env.hydrogens
    heavy = env.degree
    ns = sum(1 for nb in env.nbrs if nb.bond == "s")
    nd = sum(1 for nb in env.nbrs if nb.bond == "d")
    na = sum(1 for nb in env.nbrs if nb.bond == "a")
    if heavy == 1:
        if H == 0 and nd == 1:
            return 17.07
        if H == 1 and ns == 1:
            return 20.23
    elif heavy == 2:
        if H == 0 and ns == 2:
            return 12.53 if env.in_ring3 else 9.23
        if H == 0 and na == 2:
            return 13.14
    return max(0.0, 28.5 - 8.6 * heavy + 1.5 * H)


def tpsa(g: MolGraph, rings=None) -> float:
    if rings is None:
        rings = perceive_rings(g)
    total = 0.0
    for env in atom_environments(g, rings):
        if env.symbol == "N":
            total += _nitrogen(env)
        elif env.symbol == "O":
            total += _oxygen(env)
    return total
