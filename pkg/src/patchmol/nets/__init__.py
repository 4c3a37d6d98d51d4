"""Small trainable networks: conditioner, latent critic, graph discriminator."""

from patchmol.nets.conditioner import (
    Conditioner,
    conditioner_forward,
    conditioner_train_step,
    critic_fit_batch,
    critic_loss,
    critic_values,
    init_conditioner,
    init_critic,
)
from patchmol.nets.dense import DenseNet, Layer, init_dense
from patchmol.nets.discriminator import (
    GraphDiscriminator,
    discriminator_forward,
    discriminator_logits,
    discriminator_train_step,
    init_discriminator,
)
from patchmol.nets.ema import EMAState, ema_update
from patchmol.nets.optim import AdamState
from patchmol.nets.ranking import latent_axis_scores, rank_latent_axes

__all__ = [
    "AdamState",
    "Conditioner",
    "DenseNet",
    "EMAState",
    "GraphDiscriminator",
    "Layer",
    "conditioner_forward",
    "conditioner_train_step",
    "critic_fit_batch",
    "critic_loss",
    "critic_values",
    "discriminator_forward",
    "discriminator_logits",
    "discriminator_train_step",
    "ema_update",
    "init_conditioner",
    "init_critic",
    "init_dense",
    "init_discriminator",
    "latent_axis_scores",
    "rank_latent_axes",
]
