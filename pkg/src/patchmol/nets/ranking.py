"""Latent-axis ranking by absolute Pearson correlation with properties."""

from __future__ import annotations

import numpy as np

from patchmol.errors import DegenerateInput, ShapeMismatch


def latent_axis_scores(Z: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``max_j |r_ij|`` for every latent column ``i``; zero-variance columns score 0."""
    Z = np.asarray(Z, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Z.ndim != 2 or Y.ndim != 2 or Z.shape[0] != Y.shape[0]:
        raise ShapeMismatch(f"Z {Z.shape} and Y {Y.shape} must share the row count")
    if Z.shape[0] < 3:
        raise DegenerateInput("at least 3 rows are required")
    zc = Z - Z.mean(axis=0)
    yc = Y - Y.mean(axis=0)
    zn = np.sqrt((zc**2).sum(axis=0))
    yn = np.sqrt((yc**2).sum(axis=0))
    cov = zc.T @ yc
    denom = np.outer(zn, yn)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(denom > 0, cov / np.where(denom > 0, denom, 1.0), 0.0)
    return np.abs(r).max(axis=1)


def rank_latent_axes(Z: np.ndarray, Y: np.ndarray, k: int) -> list[int]:
    """Indices of the ``k`` best-correlated latent axes, best first, ties to the lower index."""
    scores = latent_axis_scores(Z, Y)
    if not 0 <= k <= scores.shape[0]:
        raise ValueError(f"k must lie in [0, {scores.shape[0]}]")
    order = sorted(range(scores.shape[0]), key=lambda i: (-scores[i], i))
    return order[:k]
