"""Exponential moving average of a parameter list."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from patchmol.errors import ShapeMismatch


@dataclass(frozen=True)
class EMAState:
    shadow: tuple
    decay: float = 0.999

    def __post_init__(self):
        if not 0.0 <= self.decay <= 1.0:
            raise ValueError("decay must lie in [0, 1]")
        object.__setattr__(self, "shadow", tuple(np.array(p, dtype=np.float64) for p in self.shadow))

    @classmethod
    def start(cls, live_params, decay: float = 0.999) -> "EMAState":
        return cls(tuple(np.array(p, dtype=np.float64, copy=True) for p in live_params), decay)


def ema_update(state: EMAState, live_params) -> EMAState:
    """``shadow <- decay * shadow + (1 - decay) * live`` elementwise."""
    live_params = list(live_params)
    if len(live_params) != len(state.shadow):
        raise ShapeMismatch("live parameter count differs from the shadow")
    out = []
    for s, p in zip(state.shadow, live_params):
        p = np.asarray(p, dtype=np.float64)
        if p.shape != s.shape:
            raise ShapeMismatch(f"shadow {s.shape} vs live {p.shape}")
        out.append(state.decay * s + (1.0 - state.decay) * p)
    return EMAState(tuple(out), state.decay)
