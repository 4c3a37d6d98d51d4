"""Quantum patch generator configuration and parameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from patchmol.errors import ShapeMismatch

MAX_QUBITS = 20


@dataclass(frozen=True)
class QuantumConfig:
    n_qubits: int = 9
    n_layers: int = 2
    n_nodes: int = 48
    f_node: int = 16
    latent_dim: int = 9

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}]")
        if self.n_layers < 0:
            raise ValueError("n_layers must be >= 0")
        if self.n_nodes < 1 or self.f_node < 4 or self.latent_dim < 1:
            raise ValueError("n_nodes >= 1, f_node >= 4 and latent_dim >= 1 are required")

    @property
    def out_width(self) -> int:
        return self.n_nodes * self.f_node

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QuantumParams:
    """Trainable tensors of the quantum patch generator.

    ``w_in`` maps a latent row vector to encoding angles (``z @ w_in + b_in``);
    ``alpha[l, q]`` holds the RX, RY, RZ angles of qubit ``q`` in layer ``l``;
    ``w_post`` and ``b_post`` form the affine readout before the sigmoid.
    """

    config: QuantumConfig
    w_in: np.ndarray
    b_in: np.ndarray
    alpha: np.ndarray
    w_post: np.ndarray
    b_post: np.ndarray

    def __post_init__(self):
        c = self.config
        expected = {
            "w_in": (c.latent_dim, c.n_qubits),
            "b_in": (c.n_qubits,),
            "alpha": (c.n_layers, c.n_qubits, 3),
            "w_post": (c.n_qubits, c.out_width),
            "b_post": (c.out_width,),
        }
        for name, shape in expected.items():
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise ShapeMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def tensors(self) -> dict[str, np.ndarray]:
        return {
            "w_in": self.w_in,
            "b_in": self.b_in,
            "alpha": self.alpha,
            "w_post": self.w_post,
            "b_post": self.b_post,
        }

    @property
    def n_trainable(self) -> int:
        return int(sum(t.size for t in self.tensors().values()))

    def replace(self, **kw) -> "QuantumParams":
        d = self.tensors()
        d.update(kw)
        return QuantumParams(self.config, **d)


def init_quantum_params(cfg: QuantumConfig, seed: int) -> QuantumParams:
    """Angles uniform in [-pi, pi]; weights uniform in +-1/sqrt(fan_in); zero biases."""
    rng = np.random.default_rng(seed)
    lim_in = 1.0 / np.sqrt(cfg.latent_dim)
    lim_post = 1.0 / np.sqrt(cfg.n_qubits)
    return QuantumParams(
        config=cfg,
        w_in=rng.uniform(-lim_in, lim_in, (cfg.latent_dim, cfg.n_qubits)),
        b_in=np.zeros(cfg.n_qubits),
        alpha=rng.uniform(-np.pi, np.pi, (cfg.n_layers, cfg.n_qubits, 3)),
        w_post=rng.uniform(-lim_post, lim_post, (cfg.n_qubits, cfg.out_width)),
        b_post=np.zeros(cfg.out_width),
    )
