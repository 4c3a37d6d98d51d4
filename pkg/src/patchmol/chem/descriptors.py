"""Physicochemical descriptors of a sanitized molecule."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from typing import Sequence

from patchmol.chem import counts
from patchmol.chem._env import atom_environments
from patchmol.chem.crippen import crippen_logp
from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import MolGraph
from patchmol.chem.qed import QEDProperties, qed_from_properties
from patchmol.chem.rings import cycle_rank, perceive_rings
from patchmol.chem.sascore import sa_proxy
from patchmol.chem.substructure import has_substructure
from patchmol.chem.tpsa import tpsa


@dataclass(frozen=True)
class Descriptors:
    qed: float
    logp: float
    sa: float
    mol_weight: float
    tpsa: float
    hbd: int
    hba: int
    rotatable_bonds: int
    fraction_sp3: float
    n_heavy_atoms: int
    n_hetero: int
    n_rings: int
    n_aromatic_rings: int
    n_aromatic_atoms: int

    def as_row(self) -> tuple:
        return astuple(self)


# fixed column order for CSV output
DESCRIPTOR_COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(Descriptors))


def molecular_weight(g: MolGraph) -> float:
    h = ELEMENTS["H"].standard_atomic_weight
    return sum(ELEMENTS[a.symbol].standard_atomic_weight + a.implicit_hydrogens * h for a in g.atoms)


def fraction_csp3(g: MolGraph) -> float:
    n_c = 0
    n_sp3 = 0
    for a, at in enumerate(g.atoms):
        if at.symbol != "C":
            continue
        n_c += 1
        if not at.aromatic and all(g.bonds[k].order == 1 and not g.bonds[k].aromatic for k in g.incident[a]):
            n_sp3 += 1
    return n_sp3 / n_c if n_c else 0.0


def compute_descriptors(g: MolGraph, alerts: Sequence[MolGraph] = ()) -> Descriptors:
    """All descriptors for a sanitized graph.

    Parameters
    ----------
    g : MolGraph
        Sanitized molecule.
    alerts : sequence of MolGraph
        Structural-alert query graphs; each one present counts once toward
        the ALERTS input of the drug-likeness estimate.
    """
    rings = perceive_rings(g)
    envs = atom_environments(g, rings)
    logp = crippen_logp(g)
    psa = tpsa(g, rings)
    mw = molecular_weight(g)
    donors = counts.hbd(envs)
    acceptors = counts.hba(envs)
    rotb = counts.rotatable_bonds(g, envs)
    n_rings = cycle_rank(g.n_atoms, [b.key for b in g.bonds])
    n_arom_rings = cycle_rank(g.n_atoms, [b.key for b in g.bonds if b.aromatic])
    n_alerts = sum(1 for q in alerts if has_substructure(g, q))
    props = QEDProperties(
        MW=mw,
        ALOGP=logp,
        HBA=counts.qed_acceptors(envs),
        HBD=donors,
        PSA=psa,
        ROTB=rotb,
        AROM=n_arom_rings,
        ALERTS=n_alerts,
    )
    return Descriptors(
        qed=qed_from_properties(props),
        logp=logp,
        sa=sa_proxy(g, rings),
        mol_weight=mw,
        tpsa=psa,
        hbd=donors,
        hba=acceptors,
        rotatable_bonds=rotb,
        fraction_sp3=fraction_csp3(g),
        n_heavy_atoms=g.n_atoms,
        n_hetero=sum(1 for a in g.atoms if a.symbol != "C"),
        n_rings=n_rings,
        n_aromatic_rings=n_arom_rings,
        n_aromatic_atoms=sum(1 for a in g.atoms if a.aromatic),
    )
