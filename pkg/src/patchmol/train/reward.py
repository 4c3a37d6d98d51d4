"""Chemistry reward, robust normalisation, warm-up schedule, selection rules."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from patchmol.chem.descriptors import Descriptors
from patchmol.errors import EmptyList, ShapeMismatch


@dataclass(frozen=True)
class RewardConfig:
    qed_weight: float = 1.6
    sa_weight: float = 0.45
    sa_knot: float = 4.5
    sa_scale: float = 5.5
    logp_weight: float = 0.25
    logp_knot: float = 3.8
    logp_scale: float = 5.2
    atoms_weight: float = 0.02
    atoms_knot: float = 30.0
    atoms_scale: float = 20.0
    hetero_weight: float = 0.03
    hetero_cap: int = 5
    clip_bound: float = 3.0
    mad_floor: float = 1e-6

    def __post_init__(self):
        if not self.clip_bound > 0 or not self.mad_floor > 0:
            raise ValueError("clip_bound and mad_floor must be > 0")
        if self.sa_scale <= 0 or self.logp_scale <= 0 or self.atoms_scale <= 0:
            raise ValueError("hinge scales must be > 0")

    def to_dict(self) -> dict:
        return asdict(self)


def _hinge(x: float) -> float:
    return x if x > 0 else 0.0


def reward_terms(qed, sa, logp, n_atoms, n_hetero, cfg: RewardConfig = RewardConfig()) -> float:
    c = cfg
    return (
        c.qed_weight * qed
        - c.sa_weight * _hinge(sa - c.sa_knot) / c.sa_scale
        - c.logp_weight * _hinge(logp - c.logp_knot) / c.logp_scale
        - c.atoms_weight * _hinge(n_atoms - c.atoms_knot) / c.atoms_scale
        + c.hetero_weight * min(n_hetero, c.hetero_cap)
    )


def chemistry_reward(d: Descriptors, cfg: RewardConfig = RewardConfig()) -> float:
    """Scalar drug-likeness reward with hinge penalties on SA, logP and size."""
    return reward_terms(d.qed, d.sa, d.logp, d.n_heavy_atoms, d.n_hetero, cfg)


def normalize_rewards(rs, cfg: RewardConfig = RewardConfig()) -> np.ndarray:
    """Median/MAD z-scores clipped to ``[-clip_bound, clip_bound]``."""
    rs = np.asarray(rs, dtype=np.float64)
    if rs.size == 0:
        raise ValueError("reward batch is empty")
    med = np.median(rs)
    mad = np.median(np.abs(rs - med))
    z = (rs - med) / max(mad, cfg.mad_floor)
    return np.clip(z, -cfg.clip_bound, cfg.clip_bound)


def warmup_lambda(t: float, lam_max: float, warmup_steps: int) -> float:
    """Cosine ramp ``lam_max * (1 - cos(pi * min(t / T, 1))) / 2``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if warmup_steps < 1:
        raise ValueError("warmup_steps must be >= 1")
    frac = min(t / warmup_steps, 1.0)
    # cos(pi f) written as sin(pi (1/2 - f)): exact zero at the midpoint
    return float(lam_max * 0.5 * (1.0 - np.sin(np.pi * (0.5 - frac))))


def select_topk(scores, k: int) -> list[int]:
    """Indices of the ``k`` largest scores, larger first, ties to the smaller index."""
    scores = np.asarray(scores, dtype=np.float64)
    if not 0 <= k <= scores.size:
        raise ValueError(f"k must lie in [0, {scores.size}]")
    order = np.lexsort((np.arange(scores.size), -scores))
    return order[:k].tolist()


def conditioner_objective(critic_vals, rewards, lam_adv: float, lam_rw: float) -> float:
    """``-lam_adv * mean(critic) - lam_rw * mean(reward)`` over the selected items."""
    critic_vals = np.asarray(critic_vals, dtype=np.float64)
    rewards = np.asarray(rewards, dtype=np.float64)
    if critic_vals.shape != rewards.shape:
        raise ShapeMismatch("critic values and rewards must be aligned")
    if critic_vals.size == 0:
        return 0.0
    return float(-lam_adv * critic_vals.mean() - lam_rw * rewards.mean())


@dataclass(frozen=True)
class GoodAtChem:
    fraction: float
    count: int
    total: int
    mean_qed: float
    mean_sa: float
    mean_logp: float


def is_good(d: Descriptors) -> bool:
    return d.qed > 0.5 and d.sa < 5.0 and d.logp < 5.0


def validate_good_at_chem(items: Iterable, total: int | None = None) -> GoodAtChem:
    """Fraction passing QED > 0.5, SA < 5 and logP < 5 (all strict).

    ``items`` are Descriptors (or None for failed decodes, which count in the
    denominator but not in the means). ``total`` overrides the denominator.
    """
    items = list(items)
    ds = [d for d in items if d is not None]
    n = len(items) if total is None else total
    count = sum(is_good(d) for d in ds)
    if not ds:
        return GoodAtChem(0.0, 0, n, 0.0, 0.0, 0.0)
    return GoodAtChem(
        count / n if n else 0.0,
        count,
        n,
        float(np.mean([d.qed for d in ds])),
        float(np.mean([d.sa for d in ds])),
        float(np.mean([d.logp for d in ds])),
    )


@dataclass(frozen=True)
class CheckpointMeta:
    good_at_chem: float
    mean_qed: float
    mean_sa: float
    mean_logp: float
    epoch: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.good_at_chem <= 1.0:
            raise ValueError("good_at_chem must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


def select_checkpoint(candidates: Sequence[CheckpointMeta]) -> CheckpointMeta:
    """Lexicographic best on (Good@chem, QED, -SA, -logP); earliest epoch on full ties."""
    candidates = list(candidates)
    if not candidates:
        raise EmptyList("no checkpoints to select from")
    return min(
        candidates,
        key=lambda c: (-c.good_at_chem, -c.mean_qed, c.mean_sa, c.mean_logp, c.epoch),
    )
