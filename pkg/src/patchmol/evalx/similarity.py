"""Fingerprint-similarity metrics: diversity, rolling similarity, MaxMin picking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from patchmol.chem.canon import canonical_smiles
from patchmol.chem.fingerprint import Fingerprint, fingerprint_matrix, morgan_fingerprint, tanimoto_matrix
from patchmol.chem.graph import MolGraph
from patchmol.chem.scaffold import murcko_scaffold
from patchmol.errors import InsufficientInput

PAIR_BUDGET = 50_000


def as_fingerprints(items, radius: int = 2, width: int = 2048) -> list[Fingerprint]:
    return [x if isinstance(x, Fingerprint) else morgan_fingerprint(x, radius, width) for x in items]


def diversity_mean_tanimoto(items, pair_budget: int = PAIR_BUDGET, seed: int = 0) -> float:
    """Mean ``1 - tanimoto`` over unordered pairs.

    ``items`` are molecules or fingerprints. Above ``pair_budget`` pairs a
    seeded uniform sample of distinct pairs (with replacement across draws)
    is used instead of all pairs.
    """
    fps = as_fingerprints(items)
    n = len(fps)
    if n < 2:
        raise InsufficientInput("diversity needs at least two molecules")
    mat = fingerprint_matrix(fps)
    n_pairs = n * (n - 1) // 2
    if n_pairs <= pair_budget:
        sim = tanimoto_matrix(mat, mat)
        iu = np.triu_indices(n, 1)
        return float(np.mean(1.0 - sim[iu]))
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, pair_budget)
    j = rng.integers(0, n - 1, pair_budget)
    j = np.where(j >= i, j + 1, j)
    a = mat[i].astype(np.float64)
    b = mat[j].astype(np.float64)
    inter = (a * b).sum(axis=1)
    union = a.sum(axis=1) + b.sum(axis=1) - inter
    sim = np.where(union > 0, inter / np.where(union > 0, union, 1.0), 1.0)
    return float(np.mean(1.0 - sim))


@dataclass(frozen=True)
class StressCurves:
    """Per-step curves of the streaming mode-collapse test.

    ``rolling_mean[t]`` is None while the window holds fewer than two molecules.
    """

    rolling_mean: list
    unique_smiles: list
    unique_scaffolds: list
    window: int

    def to_dict(self) -> dict:
        return {
            "window": self.window,
            "rolling_mean": self.rolling_mean,
            "unique_smiles": self.unique_smiles,
            "unique_scaffolds": self.unique_scaffolds,
        }


def rolling_tanimoto_stress(stream, window: int = 512) -> StressCurves:
    """Rolling mean pairwise similarity over the last ``window`` molecules.

    All pairs of the window are evaluated at every step (the window
    similarity matrix is kept in a ring buffer), so no pair sampling is ever
    needed. Cumulative counts of distinct canonical SMILES and distinct
    Murcko scaffolds (the empty scaffold of acyclic molecules counts as one)
    are tracked alongside.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    sims = np.zeros((window, window))
    fps = np.zeros((window, 0), dtype=np.uint8)
    means, n_smi, n_scaf = [], [], []
    seen_smi: set[str] = set()
    seen_scaf: set[str] = set()
    for t, m in enumerate(stream):
        if not isinstance(m, MolGraph):
            raise TypeError("stream items must be sanitized molecules")
        fp = fingerprint_matrix([morgan_fingerprint(m)])
        if fps.shape[1] == 0:
            fps = np.zeros((window, fp.shape[1]), dtype=np.uint8)
        slot = t % window
        fps[slot] = fp[0]
        filled = min(t + 1, window)
        row = tanimoto_matrix(fp, fps[:filled])[0]
        sims[slot, :filled] = row
        sims[:filled, slot] = row
        if filled >= 2:
            iu = np.triu_indices(filled, 1)
            means.append(float(np.mean(sims[:filled, :filled][iu])))
        else:
            means.append(None)
        seen_smi.add(canonical_smiles(m))
        seen_scaf.add(canonical_smiles(murcko_scaffold(m)))
        n_smi.append(len(seen_smi))
        n_scaf.append(len(seen_scaf))
    return StressCurves(means, n_smi, n_scaf, window)


def maxmin_diverse_select(items, k: int, seed_index: int = 0) -> list[int]:
    """Greedy farthest-point selection under Tanimoto distance.

    Starts from ``seed_index`` and repeatedly adds the item whose minimum
    distance to the selection is largest (smaller index on ties). Returned
    in selection order.
    """
    fps = as_fingerprints(items)
    n = len(fps)
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    if k == 0:
        return []
    if not 0 <= seed_index < n:
        raise ValueError("seed_index out of range")
    mat = fingerprint_matrix(fps)
    chosen = [seed_index]
    mind = 1.0 - tanimoto_matrix(mat, mat[[seed_index]])[:, 0]
    taken = np.zeros(n, dtype=bool)
    taken[seed_index] = True
    while len(chosen) < k:
        cand = np.where(taken, -np.inf, mind)
        nxt = int(np.argmax(cand))  # first maximum = smallest index
        chosen.append(nxt)
        taken[nxt] = True
        mind = np.minimum(mind, 1.0 - tanimoto_matrix(mat, mat[[nxt]])[:, 0])
    return chosen
