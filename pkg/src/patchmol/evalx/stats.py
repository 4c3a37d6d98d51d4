"""Rank-correlation audit of one latent coordinate against molecular properties."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata
from scipy.stats import t as student_t

from patchmol.errors import DegenerateInput, ShapeMismatch

MIN_N = 10


@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    p_value: float
    n: int


def spearman(x, y) -> SpearmanResult:
    """Spearman rho with average ranks for ties; two-sided p from the t approximation.

    A constant ``y`` carries no rank information and yields rho 0, p 1.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    rx = rankdata(x)
    ry = rankdata(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sx = np.sqrt(dx @ dx)
    sy = np.sqrt(dy @ dy)
    if sy == 0:
        return SpearmanResult(0.0, 1.0, n)
    rho = float(np.clip(dx @ dy / (sx * sy), -1.0, 1.0))
    if abs(rho) == 1.0:
        return SpearmanResult(rho, 0.0, n)
    t = rho * np.sqrt((n - 2) / (1.0 - rho * rho))
    p = float(2.0 * student_t.sf(abs(t), n - 2))
    return SpearmanResult(rho, p, n)


def spearman_audit(latent, props, names=("qed", "sa", "logp")) -> dict[str, SpearmanResult]:
    """Spearman correlation of ``latent`` with every property column."""
    latent = np.asarray(latent, dtype=np.float64).reshape(-1)
    props = np.asarray(props, dtype=np.float64)
    if props.ndim == 1:
        props = props[:, None]
    if props.shape[0] != latent.shape[0]:
        raise ShapeMismatch("one property row per latent value is required")
    if latent.shape[0] < MIN_N:
        raise DegenerateInput(f"need at least {MIN_N} samples")
    if np.all(latent == latent[0]):
        raise DegenerateInput("latent values are constant")
    names = list(names)[: props.shape[1]]
    return {name: spearman(latent, props[:, j]) for j, name in enumerate(names)}
