"""Pareto fronts over (QED up, SA down, logP down)."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class ParetoConfig:
    sa_max: float = 6.0
    logp_min: float = -0.5
    logp_max: float = 5.0

    def __post_init__(self):
        if not self.logp_min <= self.logp_max:
            raise ValueError("logp window bounds are out of order")

    def to_dict(self) -> dict:
        return asdict(self)


def _oriented(points) -> np.ndarray:
    """Rows as minimisation objectives: (-QED, SA, logP)."""
    p = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    return p * np.array([-1.0, 1.0, 1.0])


def non_dominated(points) -> list[int]:
    """Indices (ascending) of points not dominated by any other point."""
    p = _oriented(points)
    n = p.shape[0]
    if n == 0:
        return []
    le = (p[:, None, :] <= p[None, :, :]).all(axis=2)  # le[i, j]: i no worse than j
    lt = (p[:, None, :] < p[None, :, :]).any(axis=2)
    dominated = (le & lt).any(axis=0)
    return np.flatnonzero(~dominated).tolist()


def in_window(points, cfg: ParetoConfig = ParetoConfig()) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    return (p[:, 1] <= cfg.sa_max) & (p[:, 2] >= cfg.logp_min) & (p[:, 2] <= cfg.logp_max)


def pareto_front(points, cfg: ParetoConfig = ParetoConfig(), constrained: bool = False) -> list[int]:
    """Front indices into ``points``; the constrained variant filters to the window first."""
    p = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if not constrained:
        return non_dominated(p)
    keep = np.flatnonzero(in_window(p, cfg))
    return [int(keep[i]) for i in non_dominated(p[keep])]
