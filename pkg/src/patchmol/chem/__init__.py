"""Minimal cheminformatics kernel for the C/N/O/F organic subset."""

from patchmol.chem.aromaticity import perceive_aromaticity
from patchmol.chem.canon import canonical_ranks, canonical_smiles
from patchmol.chem.descriptors import DESCRIPTOR_COLUMNS, Descriptors, compute_descriptors
from patchmol.chem.elements import ELEMENTS, Element
from patchmol.chem.fingerprint import Fingerprint, morgan_fingerprint, tanimoto
from patchmol.chem.graph import Atom, Bond, MolGraph
from patchmol.chem.io import mol_from_smiles, read_smiles_file, try_mol
from patchmol.chem.rings import perceive_rings
from patchmol.chem.sanitize import sanitize
from patchmol.chem.scaffold import murcko_scaffold
from patchmol.chem.smiles import parse_smiles

__all__ = [
    "Atom",
    "Bond",
    "DESCRIPTOR_COLUMNS",
    "Descriptors",
    "ELEMENTS",
    "Element",
    "Fingerprint",
    "MolGraph",
    "canonical_ranks",
    "canonical_smiles",
    "compute_descriptors",
    "mol_from_smiles",
    "morgan_fingerprint",
    "murcko_scaffold",
    "parse_smiles",
    "perceive_aromaticity",
    "perceive_rings",
    "read_smiles_file",
    "sanitize",
    "tanimoto",
    "try_mol",
]
