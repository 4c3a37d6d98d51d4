"""Gradient-step rules over flat parameter lists."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def sgd_step(params, grads, lr: float) -> list[np.ndarray]:
    return [p - lr * g for p, g in zip(params, grads)]


@dataclass(frozen=True)
class AdamState:
    m: tuple
    v: tuple
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros_like(cls, params) -> "AdamState":
        return cls(tuple(np.zeros_like(p) for p in params), tuple(np.zeros_like(p) for p in params))


def adam_step(params, grads, state: AdamState, lr: float):
    """One bias-corrected Adam update; returns ``(new_params, new_state)``."""
    t = state.t + 1
    b1, b2 = state.beta1, state.beta2
    m = tuple(b1 * mi + (1 - b1) * g for mi, g in zip(state.m, grads))
    v = tuple(b2 * vi + (1 - b2) * g * g for vi, g in zip(state.v, grads))
    c1 = 1 - b1**t
    c2 = 1 - b2**t
    new = [p - lr * (mi / c1) / (np.sqrt(vi / c2) + state.eps) for p, mi, vi in zip(params, m, v)]
    return new, AdamState(m, v, t, b1, b2, state.eps)


def apply_step(params, grads, lr: float, opt_state: AdamState | None):
    """SGD when ``opt_state`` is None, Adam otherwise."""
    if opt_state is None:
        return sgd_step(params, grads, lr), None
    return adam_step(params, grads, opt_state, lr)
