"""Wildman-Crippen atomic-contribution logP restricted to C, N, O, F, H.

Atom types are assigned by the first matching rule of the published
contribution table, in table order.
"""

from __future__ import annotations

from patchmol.chem._env import AtomEnv, atom_environments
from patchmol.chem.graph import MolGraph

CONTRIB = {
    "C1": 0.1441, "C2": 0.0000, "C3": -0.2035, "C4": -0.2051, "C5": -0.2783,
    "C6": 0.1551, "C8": 0.08452, "C9": -0.1444, "C10": -0.0516, "C11": 0.1193,
    "C12": -0.0967, "C14": 0.0000, "C18": 0.1581, "C19": 0.2955, "C20": 0.2713,
    "C21": 0.1360, "C22": 0.4619, "C23": 0.5437, "C25": -0.8186, "C26": 0.2640,
    "CS": 0.08129,
    "H1": 0.1230, "H2": -0.2677, "H3": 0.2142, "H4": 0.2980, "HS": 0.1125,
    "N1": -1.0190, "N2": -0.7096, "N3": -1.0270, "N4": -0.5188, "N5": 0.08387,
    "N6": 0.1836, "N7": -0.3187, "N8": -0.4458, "N11": -0.3239, "NS": -0.4806,
    "O1": 0.1552, "O2": -0.2893, "O3": -0.0684, "O4": -0.4195, "O5": 0.0335,
    "O8": 0.1788, "O9": -0.1526, "O10": 0.1129, "O11": 0.4833, "OS": -0.1188,
    "F": 0.4202,
}

_HETERO = {"N", "O", "F"}


def _singles(env: AtomEnv):
    # default SMARTS bond: single or aromatic
    return [nb for nb in env.nbrs if nb.bond in ("s", "a")]


def _carbon_type(env: AtomEnv) -> str:
    H = env.hydrogens
    X = env.total_connections
    s = _singles(env)
    aliph_c = sum(1 for nb in s if nb.symbol == "C" and not nb.aromatic)
    hetero = sum(1 for nb in s if nb.symbol in _HETERO and not nb.aromatic)
    heavy_aliph = sum(1 for nb in s if not nb.aromatic)
    arom = sum(1 for nb in s if nb.aromatic)
    arom_c = sum(1 for nb in s if nb.aromatic and nb.symbol == "C")
    dbl = [nb for nb in env.nbrs if nb.bond == "d"]
    dbl_aliph_c = sum(1 for nb in dbl if nb.symbol == "C" and not nb.aromatic)

    if env.aromatic:
        n_arom_bonds = sum(1 for nb in env.nbrs if nb.bond == "a")
        if any(nb.symbol == "F" for nb in env.nbrs):
            return "C14"
        if H == 1:
            return "C18"
        if n_arom_bonds >= 3:
            return "C19"
        if n_arom_bonds >= 2:
            exo = [nb for nb in env.nbrs if nb.bond == "s"]
            if any(nb.aromatic for nb in exo):
                return "C20"
            if any(nb.symbol == "C" and not nb.aromatic for nb in exo):
                return "C21"
            if any(nb.symbol == "N" and not nb.aromatic for nb in exo):
                return "C22"
            if any(nb.symbol == "O" and not nb.aromatic for nb in exo):
                return "C23"
            if any(nb.symbol in ("C", "N", "O") for nb in dbl):
                return "C25"
        return "CS"

    if H == 4 or (H == 3 and aliph_c >= 1) or (H == 2 and aliph_c >= 2):
        return "C1"
    if (H == 1 and aliph_c >= 3) or (H == 0 and aliph_c >= 4):
        return "C2"
    if (H == 3 and hetero >= 1) or (H == 2 and X == 4 and hetero >= 1 and heavy_aliph >= 2):
        return "C3"
    if X == 4 and hetero >= 1 and ((H == 1 and heavy_aliph >= 3) or (H == 0 and heavy_aliph >= 4)):
        return "C4"
    if any(nb.symbol != "C" and not nb.aromatic for nb in dbl):
        return "C5"
    if dbl_aliph_c >= 1 and (
        H == 2 or (H == 1 and heavy_aliph >= 1) or (H == 0 and heavy_aliph >= 2) or dbl_aliph_c >= 2
    ):
        return "C6"
    if H == 3 and arom_c >= 1:
        return "C8"
    if H == 3 and arom >= 1:
        return "C9"
    if X == 4 and arom >= 1:
        return {2: "C10", 1: "C11", 0: "C12"}.get(H, "CS")
    if dbl_aliph_c >= 1 and (
        (arom >= 1 and heavy_aliph >= 1) or (arom_c >= 1 and arom >= 2) or (H == 1 and arom >= 1)
    ):
        return "C26"
    if any(nb.aromatic and nb.symbol == "C" for nb in dbl):
        return "C26"
    return "CS"


def _nitrogen_type(env: AtomEnv) -> str:
    if env.aromatic:
        return "N11"
    H = env.hydrogens
    s = [nb for nb in env.nbrs if nb.bond == "s"]
    sA = sum(1 for nb in s if not nb.aromatic)
    sa = sum(1 for nb in s if nb.aromatic)
    d = sum(1 for nb in env.nbrs if nb.bond == "d")
    if H == 2 and sA >= 1:
        return "N1"
    if H == 1 and sA >= 2:
        return "N2"
    if H == 2 and sa >= 1:
        return "N3"
    if H == 1 and sa >= 1 and sA + sa >= 2:
        return "N4"
    if H == 1 and d >= 1:
        return "N5"
    if d >= 1 and sA + sa >= 1:
        return "N6"
    if sA >= 3:
        return "N7"
    if (sa >= 1 and sA >= 1 and sA + sa >= 3) or sa >= 3:
        return "N8"
    return "NS"


def _carbonyl_partner_ok(c: AtomEnv, o_index: int) -> str | None:
    """Classify the carbon of a C=O for the oxygen type rules."""
    others = [nb for nb in c.nbrs if nb.index != o_index]
    s = [nb for nb in others if nb.bond in ("s", "a")]
    aliph_c = sum(1 for nb in s if nb.symbol == "C" and not nb.aromatic)
    aliph_heavy = sum(1 for nb in s if not nb.aromatic)
    arom_c = sum(1 for nb in s if nb.aromatic and nb.symbol == "C")
    aliph_no = sum(1 for nb in s if nb.symbol in ("N", "O") and not nb.aromatic)
    non_c = sum(1 for nb in s if nb.symbol != "C")
    H = c.hydrogens
    dbl_o = sum(1 for nb in others if nb.bond == "d" and nb.symbol == "O" and not nb.aromatic)
    if (H == 1 and aliph_c >= 1) or (aliph_c >= 1 and aliph_heavy >= 2) or (
        H == 1 and aliph_no >= 1
    ) or H == 2 or (c.total_connections == 2 and dbl_o >= 1):
        return "O9"
    c_then_arom = any(
        x.symbol == "C" and y.aromatic for x in s for y in s if x.index != y.index
    )
    if (H == 1 and arom_c >= 1) or c_then_arom or (arom_c >= 1 and aliph_heavy >= 1):
        return "O10"
    if non_c >= 2:
        return "O11"
    return None


def _oxygen_type(env: AtomEnv, envs: list[AtomEnv]) -> str:
    if env.aromatic:
        return "O1"
    H = env.hydrogens
    if H in (1, 2):
        return "O2"
    s = [nb for nb in env.nbrs if nb.bond == "s"]
    sA = sum(1 for nb in s if not nb.aromatic)
    sa = sum(1 for nb in s if nb.aromatic)
    if sA >= 2:
        return "O3"
    if sa >= 1 and sA + sa >= 2:
        return "O4"
    dbl = [nb for nb in env.nbrs if nb.bond == "d"]
    if any(nb.symbol in ("N", "O") for nb in dbl):
        return "O5"
    if any(nb.symbol == "C" and nb.aromatic for nb in dbl):
        return "O8"
    for nb in dbl:
        if nb.symbol == "C" and not nb.aromatic:
            t = _carbonyl_partner_ok(envs[nb.index], env.index)
            if t is not None:
                return t
    return "OS"


def _hydrogen_type(env: AtomEnv, envs: list[AtomEnv]) -> str:
    if env.symbol == "C":
        return "H1"
    if env.symbol == "N":
        return "H3"
    if env.symbol == "O":
        heavy = [nb for nb in env.nbrs if nb.bond == "s"]
        if not heavy:
            return "H2"
        for nb in heavy:
            if nb.symbol == "C" and not nb.aromatic and nb.degree + nb.hydrogens == 4:
                return "H2"
            if nb.symbol == "C" and nb.aromatic:
                return "H2"
            if nb.symbol not in ("C", "N", "O"):
                return "H2"
        for nb in heavy:
            if nb.symbol == "N":
                return "H3"
        for nb in heavy:
            if nb.symbol == "C" and not nb.aromatic:
                if any(x.bond == "d" and x.symbol in ("C", "N", "O") for x in envs[nb.index].nbrs):
                    return "H4"
            if nb.symbol == "O":
                return "H4"
        return "HS"
    return "H2"


def atom_types(g: MolGraph) -> list[tuple[str, str | None, int]]:
    """Per heavy atom: (heavy-atom type, hydrogen type or None, hydrogen count)."""
    envs = atom_environments(g)
    out = []
    for env in envs:
        if env.symbol == "C":
            t = _carbon_type(env)
        elif env.symbol == "N":
            t = _nitrogen_type(env)
        elif env.symbol == "O":
            t = _oxygen_type(env, envs)
        else:
            t = "F"
        ht = _hydrogen_type(env, envs) if env.hydrogens else None
        out.append((t, ht, env.hydrogens))
    return out


def crippen_logp(g: MolGraph) -> float:
    total = 0.0
    for t, ht, nh in atom_types(g):
        total += CONTRIB[t]
        if ht is not None:
            total += nh * CONTRIB[ht]
    return total
