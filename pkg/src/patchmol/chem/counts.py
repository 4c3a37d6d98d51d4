"""Donor, acceptor, rotatable-bond and related atom counts."""

from __future__ import annotations

from patchmol.chem._env import AtomEnv
from patchmol.chem.graph import MolGraph


def hbd(envs: list[AtomEnv]) -> int:
    """N with at least one H, O with exactly one H, aromatic n bearing H."""
    n = 0
    for e in envs:
        if e.symbol == "N" and e.hydrogens >= 1:
            n += 1
        elif e.symbol == "O" and e.hydrogens == 1 and not e.aromatic:
            n += 1
    return n


def _has_nonring_double_to_nops(env: AtomEnv) -> bool:
    return any(nb.bond == "d" and not nb.in_ring and nb.symbol in ("O", "N") for nb in env.nbrs)


def hba(envs: list[AtomEnv]) -> int:
    """Lipinski-style acceptor count.

    Counts hydroxyl O not attached to an X=O/N centre, O without H,
    trivalent N not attached to a centre with an acyclic double bond to
    O or N, aromatic n without H, and aromatic o.
    """
    n = 0
    for e in envs:
        if e.symbol == "O":
            if e.aromatic or e.hydrogens == 0:
                n += 1
            elif e.hydrogens == 1:
                if not any(
                    any(x.bond == "d" and x.symbol in ("O", "N") for x in envs[nb.index].nbrs)
                    for nb in e.nbrs
                ):
                    n += 1
        elif e.symbol == "N":
            if e.aromatic:
                if e.hydrogens == 0:
                    n += 1
                continue
            if any(
                nb.bond == "s" and _has_nonring_double_to_nops(envs[nb.index]) for nb in e.nbrs
            ):
                continue
            n += 1
    return n


def qed_acceptors(envs: list[AtomEnv]) -> int:
    """Acceptor count used by the drug-likeness estimate."""
    n = 0
    for e in envs:
        X = e.total_connections
        if e.symbol == "O":
            if e.aromatic:
                n += e.hydrogens == 0 and X == 2
            elif e.hydrogens == 1 and X == 2:
                n += 1
            elif e.hydrogens == 0 and X in (1, 2):
                n += 1
        elif e.symbol == "N":
            if e.aromatic:
                n += e.hydrogens == 0 and X == 2
            elif e.hydrogens == 0 and X == 1:
                n += 1
            elif X == 3 and not any(x.bond == "d" for x in e.nbrs):
                # exclude N attached to a carbonyl carbon
                amide = False
                for nb in e.nbrs:
                    if nb.symbol == "C" and not nb.aromatic and nb.bond == "s":
                        if any(
                            x.bond == "d" and x.symbol == "O" for x in envs[nb.index].nbrs
                        ):
                            amide = True
                            break
                if not amide:
                    n += 1
    return int(n)


def _is_trihalomethyl(e: AtomEnv) -> bool:
    return e.symbol == "C" and sum(1 for nb in e.nbrs if nb.symbol == "F") >= 3


def _is_tert_butyl_center(e: AtomEnv, envs: list[AtomEnv]) -> bool:
    if e.symbol != "C" or e.aromatic:
        return False
    methyls = sum(
        1
        for nb in e.nbrs
        if nb.bond == "s" and nb.symbol == "C" and not nb.aromatic and nb.hydrogens == 3
    )
    return methyls >= 3


def _is_amide_carbon(e: AtomEnv, envs: list[AtomEnv]) -> bool:
    # CD3 with a double bond to N/O and an acyclic single bond to N/O
    if e.symbol != "C" or e.aromatic or e.degree != 3:
        return False
    if not any(nb.bond == "d" and nb.symbol in ("N", "O") for nb in e.nbrs):
        return False
    return any(
        nb.bond == "s" and not nb.in_ring and nb.symbol in ("N", "O") and not nb.aromatic
        for nb in e.nbrs
    )


def _is_amide_heteroatom(e: AtomEnv, envs: list[AtomEnv]) -> bool:
    if e.symbol not in ("N", "O") or e.aromatic:
        return False
    for nb in e.nbrs:
        if nb.bond == "s" and not nb.in_ring and nb.symbol == "C" and not nb.aromatic:
            c = envs[nb.index]
            if c.degree == 3 and any(x.bond == "d" and x.symbol in ("N", "O") for x in c.nbrs):
                return True
    return False


def rotatable_bonds(g: MolGraph, envs: list[AtomEnv]) -> int:
    """Strict rotatable-bond count.

    A single, acyclic bond between two non-terminal atoms counts unless an
    end is a CF3 or tert-butyl centre, or both ends are amide-type
    (the carbonyl carbon or the heteroatom of an amide, ester or carbamate).
    """
    base = [
        e.degree > 1 and not _is_trihalomethyl(e) and not _is_tert_butyl_center(e, envs)
        for e in envs
    ]
    first = [
        base[k] and not _is_amide_carbon(e, envs) and not _is_amide_heteroatom(e, envs)
        for k, e in enumerate(envs)
    ]
    n = 0
    for b in g.bonds:
        if b.in_ring or b.aromatic or b.order != 1:
            continue
        if (first[b.i] and base[b.j]) or (first[b.j] and base[b.i]):
            n += 1
    return n
