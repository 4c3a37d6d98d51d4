"""Patch tensor to sanitized molecule: two decoding routes and candidate choice."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from patchmol.assemble.config import AggregatorConfig
from patchmol.assemble.proto import (
    ProtoGraph,
    _pairwise,
    activate_nodes,
    propose_edges,
    protect_six_rings,
    prune_degrees,
    upgrade_double_bonds,
)
from patchmol.chem.aromaticity import perceive_aromaticity
from patchmol.chem.descriptors import Descriptors, compute_descriptors
from patchmol.chem.graph import MolGraph
from patchmol.chem.sanitize import sanitize
from patchmol.errors import GenerationFailure, PatchmolError


def aromatize_two_pass(g: MolGraph) -> MolGraph:
    """Perceive aromaticity, keep the largest fragment, perceive again, sanitize.

    The largest fragment has the most atoms, then the most bonds, then the
    smallest first atom index.
    """
    g = perceive_aromaticity(g)
    comps = g.components()
    if len(comps) > 1:
        n_bonds = [0] * len(comps)
        where = {a: c for c, comp in enumerate(comps) for a in comp}
        for b in g.bonds:
            n_bonds[where[b.i]] += 1
        best = min(range(len(comps)), key=lambda c: (-len(comps[c]), -n_bonds[c], comps[c][0]))
        g = g.subgraph(comps[best])
    g = perceive_aromaticity(g)
    return sanitize(g)


def score_candidate(m: MolGraph | Descriptors, weights=(1.0, 0.2, 0.2, 5.0)) -> float:
    """``w_qed * QED - w_sa * SA - w_logp * max(0, logP - gamma)``.

    Accepts a sanitized graph or its precomputed descriptors.
    """
    w_qed, w_sa, w_logp, gamma = weights
    d = m if isinstance(m, Descriptors) else compute_descriptors(m)
    return w_qed * d.qed - w_sa * d.sa - w_logp * max(0.0, d.logp - gamma)


@dataclass(frozen=True)
class Candidate:
    route: str
    mol: MolGraph
    descriptors: Descriptors
    score: float


@dataclass(frozen=True)
class AssemblyResult:
    mol: MolGraph
    route: str
    score: float
    descriptors: Descriptors
    fallback: bool
    n_active: int


def _tail(pg: ProtoGraph, cfg: AggregatorConfig, threshold: float, slack: float) -> MolGraph:
    pg = protect_six_rings(pg, cfg.knn_k, slack, threshold)
    pg = prune_degrees(pg, cfg.degree_caps)
    pg = upgrade_double_bonds(
        pg,
        cfg.double_quota,
        cfg.ring_bond_preference,
        cfg.allow_cumulated,
        cfg.min_double_ring_size,
    )
    return aromatize_two_pass(pg.to_molgraph())


def graph_route(h: np.ndarray, rows, symbols, cfg: AggregatorConfig) -> MolGraph:
    pg = propose_edges(rows, symbols, h[rows], cfg.tau)
    return _tail(pg, cfg, cfg.tau, cfg.ring_slack)


def coordinate_unit(coords: np.ndarray) -> float:
    """Median nearest-neighbour distance, the length unit of the coordinate route."""
    d = _pairwise(coords)
    np.fill_diagonal(d, np.inf)
    return float(np.median(d.min(axis=1)))


def coordinate_route(h: np.ndarray, rows, symbols, cfg: AggregatorConfig) -> MolGraph:
    """Channels 0-2 as 3D positions; bonds inside the scaled distance window.

    Ring protection only tags cycles here (slack 1 on the window's upper edge)
    because every in-window pair is already bonded.
    """
    coords = h[rows][:, :3]
    unit = max(coordinate_unit(coords), 1e-9)
    lo, hi = cfg.coord_window
    pg = propose_edges(rows, symbols, coords, hi * unit)
    keep = {k: e for k, e in pg.edges.items() if pg.dist[k] >= lo * unit}
    pg = pg.with_edges(keep)
    return _tail(pg, cfg, hi * unit, 1.0)


def _candidate(route: str, build, h, rows, symbols, cfg) -> Candidate | None:
    try:
        mol = build(h, rows, symbols, cfg)
    except (PatchmolError, ValueError):
        return None
    if mol.n_atoms == 0:
        return None
    d = compute_descriptors(mol)
    return Candidate(route, mol, d, score_candidate(d, cfg.score_weights))


def assemble_candidates(h: np.ndarray, cfg: AggregatorConfig) -> tuple[list[Candidate], int]:
    h = np.asarray(h, dtype=np.float64)
    rows, symbols = activate_nodes(h, cfg.eps_act, cfg.element_bias)
    if not rows:
        return [], 0
    cands = [_candidate("graph", graph_route, h, rows, symbols, cfg)]
    if len(rows) >= 2:
        cands.append(_candidate("coordinate", coordinate_route, h, rows, symbols, cfg))
    return [c for c in cands if c is not None], len(rows)


def assemble_detailed(h: np.ndarray, cfg: AggregatorConfig | None = None) -> AssemblyResult:
    """Like :func:`assemble_molecule` but also reports route, score and fallback use."""
    cfg = cfg or AggregatorConfig()
    cands, n_active = assemble_candidates(h, cfg)
    if not cands:
        raise GenerationFailure("no active nodes" if n_active == 0 else "no sanitizable candidate")

    def big_enough(c: Candidate) -> bool:
        return c.mol.n_atoms >= cfg.min_atoms and c.mol.n_bonds >= cfg.min_bonds

    # max score, first route on ties
    best = max(enumerate(cands), key=lambda t: (t[1].score, -t[0]))[1]
    fallback = False
    if not big_enough(best):
        ok = [c for c in cands if big_enough(c)]
        if not ok:
            raise GenerationFailure(
                f"largest fragment has {max(c.mol.n_atoms for c in cands)} atoms"
            )
        best = max(enumerate(ok), key=lambda t: (t[1].mol.n_atoms, t[1].score, -t[0]))[1]
        fallback = True
    return AssemblyResult(best.mol, best.route, best.score, best.descriptors, fallback, n_active)


def assemble_molecule(h: np.ndarray, cfg: AggregatorConfig | None = None) -> MolGraph:
    """Assemble a patch tensor into a sanitized molecule.

    Raises
    ------
    GenerationFailure
        When neither route yields a sanitizable molecule of the minimum size.
    """
    return assemble_detailed(h, cfg).mol


def calibrate_tau(patches, quantile: float = 0.05, eps_act: float = 0.15) -> float:
    """``tau`` set to a quantile of pairwise active-row distances over ``patches``."""
    if not 0 < quantile < 1:
        raise ValueError("quantile must lie in (0, 1)")
    pooled = []
    for h in patches:
        h = np.asarray(h, dtype=np.float64)
        rows, _ = activate_nodes(h, eps_act)
        if len(rows) >= 2:
            d = _pairwise(h[rows])
            pooled.append(d[np.triu_indices(len(rows), 1)])
    if not pooled:
        raise ValueError("no patch has two or more active rows")
    return float(np.quantile(np.concatenate(pooled), quantile))
