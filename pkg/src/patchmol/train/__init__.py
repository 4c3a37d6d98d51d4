"""Adversarial conditioner training with a chemistry-shaped reward."""

from patchmol.train.checkpoint import (
    LoadedCheckpoint,
    load_checkpoint,
    save_checkpoint,
    write_best_marker,
)
from patchmol.train.config import TrainConfig
from patchmol.train.loop import (
    Corpus,
    EpochMetrics,
    TrainState,
    build_corpus,
    head_digest,
    prepare_training,
    run_training,
    surrogate_latents,
    train_adversarial_epoch,
    validate,
)
from patchmol.train.reward import (
    CheckpointMeta,
    GoodAtChem,
    RewardConfig,
    chemistry_reward,
    conditioner_objective,
    normalize_rewards,
    select_checkpoint,
    select_topk,
    validate_good_at_chem,
    warmup_lambda,
)

__all__ = [
    "LoadedCheckpoint",
    "load_checkpoint",
    "save_checkpoint",
    "write_best_marker",
    "CheckpointMeta",
    "Corpus",
    "EpochMetrics",
    "GoodAtChem",
    "RewardConfig",
    "TrainConfig",
    "TrainState",
    "build_corpus",
    "chemistry_reward",
    "conditioner_objective",
    "head_digest",
    "normalize_rewards",
    "prepare_training",
    "run_training",
    "select_checkpoint",
    "select_topk",
    "surrogate_latents",
    "train_adversarial_epoch",
    "validate",
    "validate_good_at_chem",
    "warmup_lambda",
]
