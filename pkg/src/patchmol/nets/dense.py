"""Dense networks with hand-written backpropagation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from patchmol.errors import ShapeMismatch

ACTIVATIONS = ("relu", "identity", "sigmoid")


def _act(name: str, a: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(a, 0.0)
    if name == "sigmoid":
        return expit(a)
    return a


def _act_grad(name: str, a: np.ndarray, out: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (a > 0).astype(np.float64)
    if name == "sigmoid":
        return out * (1.0 - out)
    return np.ones_like(a)


@dataclass(frozen=True)
class Layer:
    w: np.ndarray
    b: np.ndarray
    activation: str = "identity"

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64)
        b = np.array(self.b, dtype=np.float64)
        if w.ndim != 2 or b.shape != (w.shape[1],):
            raise ShapeMismatch(f"layer weight {w.shape} and bias {b.shape} do not chain")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class DenseNet:
    """Stack of affine layers ``h @ w + b`` followed by an activation.

    Dropout (inverted, rate ``dropout_rate``) follows every hidden layer and
    is applied only when a random generator is passed to the forward call.
    """

    layers: tuple[Layer, ...]
    dropout_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must lie in [0, 1)")
        for a, b in zip(self.layers, self.layers[1:]):
            if a.w.shape[1] != b.w.shape[0]:
                raise ShapeMismatch("consecutive layer shapes do not chain")

    @property
    def in_dim(self) -> int:
        return self.layers[0].w.shape[0]

    @property
    def out_dim(self) -> int:
        return self.layers[-1].w.shape[1]

    def params(self) -> list[np.ndarray]:
        out = []
        for layer in self.layers:
            out += [layer.w, layer.b]
        return out

    def with_params(self, params) -> "DenseNet":
        params = list(params)
        if len(params) != 2 * len(self.layers):
            raise ShapeMismatch("parameter list length does not match the layer count")
        layers = []
        for k, layer in enumerate(self.layers):
            w, b = params[2 * k], params[2 * k + 1]
            if np.shape(w) != layer.w.shape or np.shape(b) != layer.b.shape:
                raise ShapeMismatch(f"layer {k} parameter shapes changed")
            layers.append(Layer(w, b, layer.activation))
        return DenseNet(tuple(layers), self.dropout_rate)

    @property
    def n_params(self) -> int:
        return int(sum(p.size for p in self.params()))

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ShapeMismatch(f"input has shape {x.shape}, expected (*, {self.in_dim})")
        return x

    def forward(self, x: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
        return self.forward_cache(x, rng)[0]

    def forward_cache(self, x: np.ndarray, rng: np.random.Generator | None = None):
        """Forward pass returning ``(output, cache)`` for :meth:`backward`."""
        h = self._check(x)
        cache = []
        last = len(self.layers) - 1
        for k, layer in enumerate(self.layers):
            a = h @ layer.w + layer.b
            act = _act(layer.activation, a)
            mask = None
            h_next = act
            if k < last and rng is not None and self.dropout_rate > 0:
                keep = 1.0 - self.dropout_rate
                mask = (rng.random(act.shape) < keep) / keep
                h_next = act * mask
            cache.append((h, a, act, mask))
            h = h_next
        return h, cache

    def backward(self, cache, dout: np.ndarray):
        """Gradients of a scalar loss given ``dout = dL/doutput``.

        Returns
        -------
        grads : list of arrays aligned with :meth:`params`
        dx : array, gradient with respect to the input
        """
        grads = [None] * (2 * len(self.layers))
        g = np.asarray(dout, dtype=np.float64)
        for k in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[k]
            h_in, a, act, mask = cache[k]
            if mask is not None:
                g = g * mask
            g = g * _act_grad(layer.activation, a, act)
            grads[2 * k] = h_in.T @ g
            grads[2 * k + 1] = g.sum(axis=0)
            g = g @ layer.w.T
        return grads, g


def init_dense(
    sizes, activations, seed: int | np.random.Generator, dropout_rate: float = 0.0
) -> DenseNet:
    """Uniform(+-1/sqrt(fan_in)) weights and zero biases."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if len(activations) != len(sizes) - 1:
        raise ValueError("one activation per layer is required")
    layers = []
    for n_in, n_out, act in zip(sizes[:-1], sizes[1:], activations):
        lim = 1.0 / np.sqrt(n_in)
        layers.append(Layer(rng.uniform(-lim, lim, (n_in, n_out)), np.zeros(n_out), act))
    return DenseNet(tuple(layers), dropout_rate)


def mse(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error over all entries and its gradient with respect to ``pred``."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeMismatch(f"prediction {pred.shape} and target {target.shape} differ")
    diff = pred - target
    return float(np.mean(diff**2)), 2.0 * diff / diff.size
