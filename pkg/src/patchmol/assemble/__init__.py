"""Connectivity-first, valence-aware assembly of patch tensors into molecules."""

from patchmol.assemble.config import ELEMENT_CHANNELS, AggregatorConfig
from patchmol.assemble.pipeline import (
    AssemblyResult,
    aromatize_two_pass,
    assemble_detailed,
    assemble_molecule,
    calibrate_tau,
    score_candidate,
)
from patchmol.assemble.proto import (
    ProtoEdge,
    ProtoGraph,
    activate_nodes,
    propose_edges,
    protect_six_rings,
    prune_degrees,
    upgrade_double_bonds,
)

__all__ = [
    "ELEMENT_CHANNELS",
    "AggregatorConfig",
    "AssemblyResult",
    "ProtoEdge",
    "ProtoGraph",
    "activate_nodes",
    "aromatize_two_pass",
    "assemble_detailed",
    "assemble_molecule",
    "calibrate_tau",
    "propose_edges",
    "protect_six_rings",
    "prune_degrees",
    "score_candidate",
    "upgrade_double_bonds",
]
