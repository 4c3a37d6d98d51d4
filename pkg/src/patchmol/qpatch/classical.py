"""Parameter-matched classical MLP head, a drop-in for the circuit path."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf, expit

from patchmol.errors import ShapeMismatch
from patchmol.qpatch.config import QuantumConfig

LN_EPS = 1e-5


def gelu(x: np.ndarray) -> np.ndarray:
    return 0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))


def layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray) -> np.ndarray:
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mu) / np.sqrt(var + LN_EPS) * gain + bias


_SHAPES = (
    ("w1", "latent_dim", "n_qubits"),
    ("b1", "n_qubits"),
    ("g1", "n_qubits"),
    ("c1", "n_qubits"),
    ("w2", "n_qubits", "n_qubits"),
    ("b2", "n_qubits"),
    ("g2", "n_qubits"),
    ("c2", "n_qubits"),
    ("w3", "n_qubits", "out_width"),
    ("b3", "out_width"),
)


@dataclass(frozen=True)
class ClassicalParams:
    """Weights of the bottleneck MLP.

    Layout: ``u = gelu(LN1(z @ w1 + b1))``, one residual block
    ``u = u + gelu(LN2(u @ w2 + b2))`` and a sigmoid readout
    ``sigmoid(u @ w3 + b3)``. The bottleneck width equals ``n_qubits`` so
    the head carries about as many trainables as the circuit path.
    """

    config: QuantumConfig
    tensors_: dict

    def __post_init__(self):
        fixed = {}
        for name, *dims in _SHAPES:
            shape = tuple(getattr(self.config, d) for d in dims)
            if name not in self.tensors_:
                raise ShapeMismatch(f"missing tensor {name}")
            arr = np.array(self.tensors_[name], dtype=np.float64)
            if arr.shape != shape:
                raise ShapeMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            fixed[name] = arr
        object.__setattr__(self, "tensors_", fixed)

    def __getattr__(self, name):
        t = self.__dict__.get("tensors_", {})
        if name in t:
            return t[name]
        raise AttributeError(name)

    def tensors(self) -> dict[str, np.ndarray]:
        return dict(self.tensors_)

    @property
    def n_trainable(self) -> int:
        return int(sum(t.size for t in self.tensors_.values()))


def init_classical_params(cfg: QuantumConfig, seed: int) -> ClassicalParams:
    rng = np.random.default_rng(seed)
    t = {}
    for name, *dims in _SHAPES:
        shape = tuple(getattr(cfg, d) for d in dims)
        if name.startswith("w"):
            lim = 1.0 / np.sqrt(shape[0])
            t[name] = rng.uniform(-lim, lim, shape)
        elif name.startswith("g"):
            t[name] = np.ones(shape)
        else:
            t[name] = np.zeros(shape)
    return ClassicalParams(cfg, t)


def zero_classical_params(cfg: QuantumConfig) -> ClassicalParams:
    t = {name: np.zeros(tuple(getattr(cfg, d) for d in dims)) for name, *dims in _SHAPES}
    return ClassicalParams(cfg, t)


def classical_patches(z: np.ndarray, p: ClassicalParams) -> np.ndarray:
    c = p.config
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z[None, :]
    if z.ndim != 2 or z.shape[1] != c.latent_dim:
        raise ShapeMismatch(f"latent has shape {z.shape}, expected (*, {c.latent_dim})")
    u = gelu(layer_norm(z @ p.w1 + p.b1, p.g1, p.c1))
    u = u + gelu(layer_norm(u @ p.w2 + p.b2, p.g2, p.c2))
    return expit(u @ p.w3 + p.b3).reshape(-1, c.n_nodes, c.f_node)


def classical_head_forward(z: np.ndarray, mlp_params: ClassicalParams) -> np.ndarray:
    """Patch tensor ``(n_nodes, f_node)`` for one latent, classical path."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1:
        raise ShapeMismatch(f"expected a single latent vector, got shape {z.shape}")
    return classical_patches(z, mlp_params)[0]
