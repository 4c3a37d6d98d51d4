"""Training configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of the warm-up and adversarial phases.

    ``lam_adv``/``lam_rw_max`` weight the critic and reward terms of the
    conditioner objective; the reward weight ramps up over ``warmup_steps``
    adversarial steps. ``top_k`` of every ``batch_size`` decoded latents are
    used for the conditioner update.
    """

    batch_size: int = 64
    top_k: int = 8
    lam_adv: float = 1.0
    lam_rw_max: float = 1.0
    warmup_steps: int = 20
    epochs: int = 20
    steps_per_epoch: int = 4
    lr_conditioner: float = 1e-3
    lr_critic: float = 3e-3
    lr_discriminator: float = 1e-3
    seed: int = 0
    disc_warmup_epochs: int = 2
    conditioner_pretrain_steps: int = 50
    jitter_scale: float = 0.05
    n_axes: int = 4
    ema_decay: float = 0.999
    label_smoothing: float = 0.1
    logit_clip: float = 10.0
    failure_reward: float = 0.0
    n_validation: int = 64
    holdout_size: int = 64
    disc_hidden: int = 32
    readout_gain: float = 1.0
    head: str = "quantum"

    def __post_init__(self):
        if self.batch_size < 1 or not 1 <= self.top_k <= self.batch_size:
            raise ValueError("need 1 <= top_k <= batch_size")
        if self.warmup_steps < 1:
            raise ValueError("warmup_steps must be >= 1")
        if self.epochs < 0 or self.steps_per_epoch < 1 or self.disc_warmup_epochs < 0:
            raise ValueError("epochs >= 0, steps_per_epoch >= 1, disc_warmup_epochs >= 0")
        if self.head not in ("quantum", "classical"):
            raise ValueError("head must be 'quantum' or 'classical'")
        if self.n_axes < 1 or self.n_validation < 1 or self.holdout_size < 1:
            raise ValueError("n_axes, n_validation and holdout_size must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)
