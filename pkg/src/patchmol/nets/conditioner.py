"""Descriptor-to-latent conditioner and the surrogate latent critic."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from patchmol.errors import ShapeMismatch
from patchmol.nets.dense import DenseNet, init_dense, mse
from patchmol.nets.optim import AdamState, apply_step

CONDITIONER_HIDDEN = (512, 256)
CRITIC_HIDDEN = (64, 64)


@dataclass(frozen=True)
class Conditioner:
    """MLP from standardized descriptors to a subset of latent axes.

    ``axes`` lists the latent coordinates the network writes; the remaining
    coordinates are filled from ``z_mean``/``z_std`` (the latent prior).
    Standardization statistics are frozen at construction.
    """

    net: DenseNet
    x_mean: np.ndarray
    x_std: np.ndarray
    axes: tuple[int, ...]
    z_mean: np.ndarray
    z_std: np.ndarray

    def __post_init__(self):
        for name in ("x_mean", "x_std", "z_mean", "z_std"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "axes", tuple(int(a) for a in self.axes))
        if self.x_mean.shape != (self.net.in_dim,) or self.x_std.shape != (self.net.in_dim,):
            raise ShapeMismatch("standardization statistics must match the input width")
        if len(self.axes) != self.net.out_dim:
            raise ShapeMismatch("one latent axis per network output is required")
        if self.z_mean.shape != self.z_std.shape or any(
            not 0 <= a < self.z_mean.shape[0] for a in self.axes
        ):
            raise ShapeMismatch("axes must index the latent prior")

    @property
    def latent_dim(self) -> int:
        return self.z_mean.shape[0]

    def standardize(self, x_raw: np.ndarray) -> np.ndarray:
        return (np.asarray(x_raw, dtype=np.float64) - self.x_mean) / self.x_std

    def with_net(self, net: DenseNet) -> "Conditioner":
        return replace(self, net=net)

    def full_latent(self, z_axes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Embed network outputs into full latents; free axes drawn from the prior."""
        z_axes = np.atleast_2d(z_axes)
        z = self.z_mean + self.z_std * rng.standard_normal((z_axes.shape[0], self.latent_dim))
        z[:, list(self.axes)] = z_axes
        return z


def init_conditioner(
    x_train: np.ndarray,
    axes,
    z_mean: np.ndarray,
    z_std: np.ndarray,
    seed: int,
    hidden=CONDITIONER_HIDDEN,
    dropout_rate: float = 0.1,
    std_floor: float = 1e-8,
) -> Conditioner:
    x_train = np.asarray(x_train, dtype=np.float64)
    sizes = (x_train.shape[1], *hidden, len(axes))
    acts = ("relu",) * len(hidden) + ("identity",)
    net = init_dense(sizes, acts, seed, dropout_rate)
    std = np.maximum(x_train.std(axis=0), std_floor)
    return Conditioner(net, x_train.mean(axis=0), std, tuple(axes), z_mean, z_std)


def _net(model) -> DenseNet:
    return model.net if isinstance(model, Conditioner) else model


def conditioner_forward(x: np.ndarray, model) -> np.ndarray:
    """Latent outputs for standardized descriptors ``x`` (inference, no dropout)."""
    return _net(model).forward(x)


def conditioner_train_step(
    model,
    batch_x: np.ndarray,
    batch_z_target: np.ndarray,
    lr: float,
    rng: np.random.Generator | None = None,
    opt_state: AdamState | None = None,
):
    """One full-batch step on mean squared error.

    Dropout is active when ``rng`` is given. Returns
    ``(updated_model, loss, opt_state)``; the loss is the pre-step value.
    """
    net = _net(model)
    out, cache = net.forward_cache(batch_x, rng)
    target = np.asarray(batch_z_target, dtype=np.float64)
    if target.ndim == 1:
        target = target[:, None]
    loss, dout = mse(out, target)
    grads, _ = net.backward(cache, dout)
    params, opt_state = apply_step(net.params(), grads, lr, opt_state)
    new = net.with_params(params)
    return (model.with_net(new) if isinstance(model, Conditioner) else new), loss, opt_state


def init_critic(latent_dim: int, seed: int, hidden=CRITIC_HIDDEN) -> DenseNet:
    sizes = (latent_dim, *hidden, 1)
    return init_dense(sizes, ("relu",) * len(hidden) + ("identity",), seed)


def critic_values(critic: DenseNet, z: np.ndarray) -> np.ndarray:
    return critic.forward(z)[:, 0]


def critic_loss(critic: DenseNet, z: np.ndarray, targets: np.ndarray) -> float:
    return mse(critic_values(critic, z), np.asarray(targets, dtype=np.float64))[0]


def critic_fit_batch(
    critic: DenseNet,
    z_batch: np.ndarray,
    targets: np.ndarray,
    lr: float,
    opt_state: AdamState | None = None,
):
    """One step on ``mean((h(z) - t)^2)``; returns ``(critic, loss, opt_state)``."""
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    out, cache = critic.forward_cache(z_batch)
    if out.shape[0] != targets.shape[0]:
        raise ShapeMismatch("one target per latent is required")
    loss, dout = mse(out[:, 0], targets)
    grads, _ = critic.backward(cache, dout[:, None])
    params, opt_state = apply_step(critic.params(), grads, lr, opt_state)
    return critic.with_params(params), loss, opt_state


def critic_input_grad(critic: DenseNet, z: np.ndarray, dvals: np.ndarray) -> np.ndarray:
    """``d(sum_i dvals_i * h(z_i)) / dz``."""
    _, cache = critic.forward_cache(z)
    _, dz = critic.backward(cache, np.asarray(dvals, dtype=np.float64)[:, None])
    return dz
