"""Warm-up and adversarial training of the conditioner against a frozen patch head."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from patchmol.assemble.config import AggregatorConfig
from patchmol.chem.descriptors import compute_descriptors
from patchmol.chem.graph import MolGraph
from patchmol.generate import (
    PROPERTY_COLUMNS,
    Generator,
    column_iqr,
    decode_latents,
    feature_matrix,
    jitter_descriptors,
    quantile_grid,
)
from patchmol.nets.conditioner import (
    conditioner_train_step,
    critic_fit_batch,
    critic_input_grad,
    critic_loss,
    critic_values,
    init_conditioner,
    init_critic,
)
from patchmol.nets.dense import DenseNet
from patchmol.nets.discriminator import (
    GraphDiscriminator,
    discriminator_logits,
    discriminator_train_step,
    init_discriminator,
    teacher,
)
from patchmol.nets.ema import EMAState
from patchmol.nets.optim import AdamState, apply_step
from patchmol.nets.ranking import rank_latent_axes
from patchmol.qpatch.classical import init_classical_params
from patchmol.qpatch.config import QuantumConfig, init_quantum_params
from patchmol.qpatch.generator import standardize_readout
from patchmol.qpatch.heads import PatchHead
from patchmol.train.config import TrainConfig
from patchmol.train.reward import (
    CheckpointMeta,
    RewardConfig,
    chemistry_reward,
    conditioner_objective,
    normalize_rewards,
    select_topk,
    validate_good_at_chem,
    warmup_lambda,
)


def surrogate_latents(x: np.ndarray, latent_dim: int, seed: int, noise: float = 0.5) -> np.ndarray:
    """Stand-in latent matrix: a seeded random projection of standardized descriptors plus noise.

    Columns are re-standardized to zero mean and unit variance.
    """
    x = np.asarray(x, dtype=np.float64)
    rng = np.random.default_rng(seed)
    xs = (x - x.mean(axis=0)) / np.maximum(x.std(axis=0), 1e-8)
    proj = rng.standard_normal((x.shape[1], latent_dim)) / np.sqrt(x.shape[1])
    z = xs @ proj + noise * rng.standard_normal((x.shape[0], latent_dim))
    return (z - z.mean(axis=0)) / np.maximum(z.std(axis=0), 1e-8)


@dataclass(frozen=True)
class Corpus:
    """Reference molecules with descriptors, feature rows and aligned latents."""

    mols: tuple[MolGraph, ...]
    features: np.ndarray
    properties: np.ndarray
    latents: np.ndarray

    @property
    def size(self) -> int:
        return len(self.mols)


def build_corpus(mols, latent_dim: int, seed: int, latents: np.ndarray | None = None) -> Corpus:
    mols = tuple(mols)
    if len(mols) < 3:
        raise ValueError("the reference corpus needs at least 3 molecules")
    descs = [compute_descriptors(m) for m in mols]
    x = feature_matrix(descs)
    props = np.array([[getattr(d, c) for c in PROPERTY_COLUMNS] for d in descs])
    if latents is None:
        latents = surrogate_latents(x, latent_dim, seed)
    latents = np.asarray(latents, dtype=np.float64)
    if latents.shape != (len(mols), latent_dim):
        raise ValueError(f"latent matrix must be ({len(mols)}, {latent_dim}), got {latents.shape}")
    return Corpus(mols, x, props, latents)


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    disc_loss: float
    critic_loss: float
    conditioner_loss: float
    mean_reward: float
    failures: int
    attempts: int
    holdout_critic_mse: float
    good_at_chem: float
    mean_qed: float
    mean_sa: float
    mean_logp: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class TrainState:
    generator: Generator
    critic: DenseNet
    disc: GraphDiscriminator
    ema: EMAState
    cond_opt: AdamState
    critic_opt: AdamState
    disc_opt: AdamState
    step: int
    epoch: int
    holdout_z: np.ndarray
    holdout_mols: tuple
    iqr: np.ndarray
    history: tuple = field(default_factory=tuple)
    checkpoints: tuple = field(default_factory=tuple)

    @property
    def head(self) -> PatchHead:
        return self.generator.head


def head_digest(head: PatchHead) -> str:
    return hashlib.sha256(head.to_bytes()).hexdigest()


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng([seed, *tags])


def build_head(qcfg: QuantumConfig, cfg: TrainConfig, z_sample: np.ndarray) -> PatchHead:
    if cfg.head == "classical":
        return PatchHead("classical", init_classical_params(qcfg, cfg.seed))
    params = init_quantum_params(qcfg, cfg.seed)
    return PatchHead("quantum", standardize_readout(params, z_sample, cfg.readout_gain))


def _targets(disc: GraphDiscriminator, decoded) -> np.ndarray:
    """Teacher probabilities for decoded items; failed decodes score 0."""
    t = np.zeros(len(decoded))
    ok = [i for i, d in enumerate(decoded) if d.ok]
    if ok:
        logits = discriminator_logits(disc, [decoded[i].mol for i in ok])
        t[ok] = 1.0 / (1.0 + np.exp(-logits))
    return t


def _holdout_mse(state: TrainState) -> float:
    t = _targets(teacher(state.ema), state.holdout_mols)
    return critic_loss(state.critic, state.holdout_z, t)


def validate(gen: Generator, corpus: Corpus, cfg: TrainConfig, epoch: int) -> CheckpointMeta:
    """Good@chem and mean properties on the fixed validation grid."""
    x = quantile_grid(corpus.features, cfg.n_validation, cfg.seed)
    _, dec = gen.generate(x, _rng(cfg.seed, 7))
    stats = validate_good_at_chem([d.descriptors for d in dec])
    return CheckpointMeta(stats.fraction, stats.mean_qed, stats.mean_sa, stats.mean_logp, epoch, cfg.seed)


def prepare_training(
    corpus: Corpus,
    cfg: TrainConfig,
    qcfg: QuantumConfig | None = None,
    agg: AggregatorConfig | None = None,
    head: PatchHead | None = None,
) -> TrainState:
    """Build every network, pretrain the conditioner and warm up the discriminator.

    The returned state is epoch 0: its validation record is the first
    checkpoint candidate.
    """
    qcfg = qcfg or QuantumConfig()
    agg = agg or AggregatorConfig()
    if corpus.latents.shape[1] != qcfg.latent_dim:
        raise ValueError("corpus latents do not match the head's latent width")
    if head is None:
        head = build_head(qcfg, cfg, corpus.latents)
    rng = _rng(cfg.seed, 1)
    axes = rank_latent_axes(corpus.latents, corpus.properties, min(cfg.n_axes, qcfg.latent_dim))
    cond = init_conditioner(
        corpus.features, axes, corpus.latents.mean(axis=0), corpus.latents.std(axis=0), cfg.seed
    )
    # supervised fit of the conditioner onto the selected latent axes
    xs = cond.standardize(corpus.features)
    target = corpus.latents[:, axes]
    cond_opt = AdamState.zeros_like(cond.net.params())
    for _ in range(cfg.conditioner_pretrain_steps):
        cond, _, cond_opt = conditioner_train_step(cond, xs, target, cfg.lr_conditioner, rng, cond_opt)
    gen = Generator(cond, head, agg)
    iqr = column_iqr(corpus.features)

    disc = init_discriminator(cfg.seed, cfg.disc_hidden)
    disc_opt = AdamState.zeros_like(disc.param_list())
    for ep in range(cfg.disc_warmup_epochs):
        order = _rng(cfg.seed, 2, ep).permutation(corpus.size)
        for start in range(0, corpus.size, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            x = jitter_descriptors(corpus.features[idx], iqr, rng, cfg.jitter_scale)
            _, dec = gen.generate(x, rng)
            fake = [d.mol for d in dec if d.ok]
            if not fake:
                continue
            real = [corpus.mols[i] for i in idx]
            disc, _, _, disc_opt = discriminator_train_step(
                disc, real, fake, cfg.lr_discriminator, cfg.label_smoothing, cfg.logit_clip, None, disc_opt
            )

    hrng = _rng(cfg.seed, 3)
    hidx = hrng.choice(corpus.size, cfg.holdout_size, replace=corpus.size < cfg.holdout_size)
    hz, hdec = gen.generate(jitter_descriptors(corpus.features[hidx], iqr, hrng, cfg.jitter_scale), hrng)
    critic = init_critic(qcfg.latent_dim, cfg.seed)
    state = TrainState(
        generator=gen,
        critic=critic,
        disc=disc,
        ema=EMAState.start(disc.param_list(), cfg.ema_decay),
        cond_opt=AdamState.zeros_like(cond.net.params()),
        critic_opt=AdamState.zeros_like(critic.params()),
        disc_opt=disc_opt,
        step=0,
        epoch=0,
        holdout_z=hz,
        holdout_mols=tuple(hdec),
        iqr=iqr,
    )
    meta = validate(gen, corpus, cfg, 0)
    rec = EpochMetrics(0, 0.0, 0.0, 0.0, 0.0, 0, 0, _holdout_mse(state), meta.good_at_chem,
                       meta.mean_qed, meta.mean_sa, meta.mean_logp)
    return replace(state, history=(rec,), checkpoints=(meta,))


def train_adversarial_epoch(
    state: TrainState,
    corpus: Corpus,
    cfg: TrainConfig,
    reward_cfg: RewardConfig | None = None,
) -> tuple[TrainState, EpochMetrics]:
    """One adversarial epoch; the patch head is never modified."""
    reward_cfg = reward_cfg or RewardConfig()
    epoch = state.epoch + 1
    rng = _rng(cfg.seed, 100, epoch)
    gen = state.generator
    cond = gen.conditioner
    critic, disc, ema = state.critic, state.disc, state.ema
    cond_opt, critic_opt, disc_opt = state.cond_opt, state.critic_opt, state.disc_opt
    step = state.step
    d_losses, c_losses, g_losses, rewards_seen = [], [], [], []
    failures = attempts = 0
    axes = list(cond.axes)
    for _ in range(cfg.steps_per_epoch):
        idx = rng.choice(corpus.size, cfg.batch_size, replace=corpus.size < cfg.batch_size)
        x = jitter_descriptors(corpus.features[idx], state.iqr, rng, cfg.jitter_scale)
        xs = cond.standardize(x)
        z = cond.full_latent(cond.net.forward(xs), rng)
        dec = decode_latents(gen.head, z, gen.agg)
        attempts += len(dec)
        failures += sum(not d.ok for d in dec)

        # critic regression onto frozen teacher scores of the decoded graphs
        t = _targets(teacher(ema), dec)
        critic, c_loss, critic_opt = critic_fit_batch(critic, z, t, cfg.lr_critic, critic_opt)
        c_losses.append(c_loss)

        rs = np.array([chemistry_reward(d.descriptors, reward_cfg) if d.ok else cfg.failure_reward for d in dec])
        rewards_seen.extend(rs.tolist())
        rn = normalize_rewards(rs, reward_cfg)
        top = select_topk(rn, cfg.top_k)
        lam_rw = warmup_lambda(step, cfg.lam_rw_max, cfg.warmup_steps)
        cvals = critic_values(critic, z[top])
        g_losses.append(conditioner_objective(cvals, rn[top], cfg.lam_adv, lam_rw))
        # only the critic term depends on the conditioner parameters
        dz = critic_input_grad(critic, z[top], np.full(len(top), -cfg.lam_adv / len(top)))
        _, cache = cond.net.forward_cache(xs[top])
        grads, _ = cond.net.backward(cache, dz[:, axes])
        params, cond_opt = apply_step(cond.net.params(), grads, cfg.lr_conditioner, cond_opt)
        cond = cond.with_net(cond.net.with_params(params))
        gen = replace(gen, conditioner=cond)

        fake = [d.mol for d in dec if d.ok]
        if fake:
            ridx = rng.choice(corpus.size, len(fake), replace=corpus.size < len(fake))
            real = [corpus.mols[i] for i in ridx]
            disc, d_loss, ema, disc_opt = discriminator_train_step(
                disc, real, fake, cfg.lr_discriminator, cfg.label_smoothing, cfg.logit_clip, ema, disc_opt
            )
            d_losses.append(d_loss)
        step += 1

    new = replace(
        state,
        generator=gen,
        critic=critic,
        disc=disc,
        ema=ema,
        cond_opt=cond_opt,
        critic_opt=critic_opt,
        disc_opt=disc_opt,
        step=step,
        epoch=epoch,
    )
    meta = validate(gen, corpus, cfg, epoch)
    metrics = EpochMetrics(
        epoch,
        float(np.mean(d_losses)) if d_losses else 0.0,
        float(np.mean(c_losses)),
        float(np.mean(g_losses)),
        float(np.mean(rewards_seen)),
        failures,
        attempts,
        _holdout_mse(new),
        meta.good_at_chem,
        meta.mean_qed,
        meta.mean_sa,
        meta.mean_logp,
    )
    return replace(new, history=state.history + (metrics,), checkpoints=state.checkpoints + (meta,)), metrics


def run_training(corpus: Corpus, cfg: TrainConfig, qcfg=None, agg=None, reward_cfg=None, on_epoch=None):
    """Warm-up then ``cfg.epochs`` adversarial epochs.

    ``on_epoch(state, metrics)`` is called after each epoch, including the
    warm-up state as epoch 0.
    """
    state = prepare_training(corpus, cfg, qcfg, agg)
    if on_epoch is not None:
        on_epoch(state, state.history[0])
    for _ in range(cfg.epochs):
        state, m = train_adversarial_epoch(state, corpus, cfg, reward_cfg)
        if on_epoch is not None:
            on_epoch(state, m)
    return state
