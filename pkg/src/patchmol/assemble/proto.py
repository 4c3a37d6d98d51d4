"""Proto-graph stages: activation, proximity edges, ring protection, pruning, upgrades."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from patchmol.assemble.config import ELEMENT_CHANNELS
from patchmol.chem.elements import ELEMENTS
from patchmol.chem.graph import Atom, Bond, MolGraph
from patchmol.chem.rings import bridges, simple_cycles
from patchmol.chem.sanitize import sanitize
from patchmol.errors import PatchmolError, ShapeMismatch

REST = 0.5


@dataclass(frozen=True)
class ProtoEdge:
    order: int = 1
    protected: bool = False


@dataclass(frozen=True)
class ProtoGraph:
    """Active patch rows with element labels and candidate bonds.

    ``rows`` are the source row indices in the patch, ``emb`` the vectors used
    for distances (local node ``u`` is ``emb[u]``), ``dist`` the cached
    pairwise L2 distances and ``edges`` maps ``(u, v)`` with ``u < v`` to
    its flags.
    """

    rows: tuple[int, ...]
    symbols: tuple[str, ...]
    emb: np.ndarray
    dist: np.ndarray
    edges: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.rows)

    def with_edges(self, edges: dict) -> "ProtoGraph":
        return replace(self, edges=dict(sorted(edges.items())))

    def degrees(self) -> list[int]:
        deg = [0] * self.n_nodes
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return [sorted(x) for x in nb]

    def protected_edges(self) -> set[tuple[int, int]]:
        return {k for k, e in self.edges.items() if e.protected}

    def to_molgraph(self) -> MolGraph:
        atoms = [Atom(s) for s in self.symbols]
        bonds = [Bond(u, v, order=e.order) for (u, v), e in self.edges.items()]
        return MolGraph(atoms, bonds)


def _pairwise(x: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def activate_nodes(h: np.ndarray, eps_act: float = 0.15, element_bias=(0.0, 0.0, 0.0, 0.0)):
    """Active rows of a patch and their element symbols.

    Returns
    -------
    rows : list of int
    symbols : list of str
    """
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] < 4:
        raise ShapeMismatch(f"patch must be (n_nodes, f_node >= 4), got {h.shape}")
    dev = np.abs(h - REST).max(axis=1)
    rows = np.flatnonzero(dev > eps_act).tolist()
    logits = h[:, :4] + np.asarray(element_bias, dtype=np.float64)
    symbols = [ELEMENT_CHANNELS[int(np.argmax(logits[r]))] for r in rows]
    return rows, symbols


def propose_edges(rows, symbols, emb: np.ndarray, tau: float) -> ProtoGraph:
    """Single, unprotected bonds between nodes at most ``tau`` apart."""
    emb = np.asarray(emb, dtype=np.float64)
    if emb.shape[0] != len(rows):
        raise ShapeMismatch("one embedding row per node is required")
    dist = _pairwise(emb) if len(rows) else np.zeros((0, 0))
    iu, iv = np.nonzero(np.triu(dist <= tau, k=1))
    edges = {(int(u), int(v)): ProtoEdge() for u, v in zip(iu, iv)}
    return ProtoGraph(tuple(rows), tuple(symbols), emb, dist, dict(sorted(edges.items())))


def knn_graph(dist: np.ndarray, k: int) -> list[list[int]]:
    """Symmetrised k-nearest-neighbour adjacency, ties broken by lower index."""
    n = dist.shape[0]
    nb = [set() for _ in range(n)]
    for u in range(n):
        order = sorted((dist[u, v], v) for v in range(n) if v != u)
        for _, v in order[:k]:
            nb[u].add(v)
            nb[v].add(u)
    return [sorted(s) for s in nb]


def _cycle_keys(cycle) -> list[tuple[int, int]]:
    n = len(cycle)
    return [tuple(sorted((cycle[i], cycle[(i + 1) % n]))) for i in range(n)]


def protect_six_rings(pg: ProtoGraph, knn_k: int, ring_slack: float, tau: float) -> ProtoGraph:
    """Close and protect six-cycles of the auxiliary kNN graph.

    A cycle is kept only when each of its edges either exists already or is
    at most ``tau * ring_slack`` long; its missing edges are then added and
    all of its edges tagged protected.
    """
    if pg.n_nodes < 6:
        return pg
    limit = tau * ring_slack
    edges = dict(pg.edges)
    # kNN edges that could ever close a kept cycle; cycles through any other
    # kNN edge would be rejected, so they are never enumerated
    usable = [
        [v for v in nbrs if (min(u, v), max(u, v)) in edges or pg.dist[u, v] <= limit]
        for u, nbrs in enumerate(knn_graph(pg.dist, knn_k))
    ]
    for cyc in simple_cycles(usable, 6, 6):
        keys = _cycle_keys(cyc)
        if all(k in edges or pg.dist[k] <= limit for k in keys):
            for k in keys:
                old = edges.get(k, ProtoEdge())
                edges[k] = replace(old, protected=True)
    return pg.with_edges(edges)


def prune_degrees(pg: ProtoGraph, degree_caps: dict) -> ProtoGraph:
    """Drop the longest bonds of over-capped atoms until every cap holds.

    The lowest-index offending atom is handled first. Unprotected bonds go
    before protected ones; among equals the longer bond goes first, then the
    smaller index pair.
    """
    edges = dict(pg.edges)
    caps = [degree_caps[s] for s in pg.symbols]
    inc: list[set] = [set() for _ in range(pg.n_nodes)]
    for u, v in edges:
        inc[u].add((u, v))
        inc[v].add((u, v))
    while True:
        over = next((a for a in range(pg.n_nodes) if len(inc[a]) > caps[a]), None)
        if over is None:
            break
        victim = min(inc[over], key=lambda e: (edges[e].protected, -pg.dist[e], e))
        del edges[victim]
        inc[victim[0]].discard(victim)
        inc[victim[1]].discard(victim)
    return pg.with_edges(edges)


def _smallest_ring_sizes(pg: ProtoGraph, edges) -> dict[tuple[int, int], int]:
    nb = [[] for _ in range(pg.n_nodes)]
    for u, v in edges:
        nb[u].append(v)
        nb[v].append(u)
    nb = [sorted(x) for x in nb]
    sizes: dict[tuple[int, int], int] = {}
    for cyc in simple_cycles(nb, 3, 8):
        for k in _cycle_keys(cyc):
            sizes[k] = min(sizes.get(k, 99), len(cyc))
    return sizes


def upgrade_double_bonds(
    pg: ProtoGraph,
    quota: int,
    prefer_ring: float = 0.0,
    allow_cumulated: bool = False,
    min_ring_size: int = 3,
) -> ProtoGraph:
    """Promote up to ``quota`` bonds to order 2, shortest first.

    Ring bonds rank as if ``prefer_ring`` shorter. Each promotion must keep
    both atoms within their maximum valence and the molecule sanitizable;
    otherwise it is rolled back and the next candidate is tried.
    """
    if quota <= 0 or not pg.edges:
        return pg
    edges = dict(pg.edges)
    ring_free = bridges(pg.neighbors())
    ring_size = _smallest_ring_sizes(pg, edges)
    valence = [0] * pg.n_nodes
    doubles = [0] * pg.n_nodes
    for (u, v), e in edges.items():
        valence[u] += e.order
        valence[v] += e.order
        if e.order == 2:
            doubles[u] += 1
            doubles[v] += 1

    def rank(k):
        bonus = prefer_ring if k not in ring_free else 0.0
        return (pg.dist[k] - bonus, k)

    done = 0
    current = pg
    for k in sorted((k for k, e in edges.items() if e.order == 1), key=rank):
        if done >= quota:
            break
        u, v = k
        if any(valence[a] + 1 > ELEMENTS[pg.symbols[a]].max_valence for a in k):
            continue
        if not allow_cumulated and (doubles[u] or doubles[v]):
            continue
        if ring_size.get(k, 99) < min_ring_size:
            continue
        trial = dict(edges)
        trial[k] = replace(edges[k], order=2)
        candidate = current.with_edges(trial)
        try:
            sanitize(candidate.to_molgraph())
        except (PatchmolError, ValueError):
            continue  # rolled back
        edges = trial
        current = candidate
        for a in k:
            valence[a] += 1
            doubles[a] += 1
        done += 1
    return current
