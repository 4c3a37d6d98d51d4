"""Monotone piecewise-linear calibration from anchor pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from patchmol.errors import DegenerateInput


def pool_adjacent_violators(y, w=None) -> np.ndarray:
    """Least-squares non-decreasing fit of ``y`` (weights ``w``)."""
    y = np.asarray(y, dtype=np.float64)
    w = np.ones_like(y) if w is None else np.asarray(w, dtype=np.float64)
    vals: list[float] = []
    wts: list[float] = []
    lens: list[int] = []
    for yi, wi in zip(y, w):
        vals.append(yi)
        wts.append(wi)
        lens.append(1)
        while len(vals) > 1 and vals[-2] > vals[-1]:
            wsum = wts[-2] + wts[-1]
            merged = (vals[-2] * wts[-2] + vals[-1] * wts[-1]) / wsum
            ln = lens[-2] + lens[-1]
            vals[-2:] = [merged]
            wts[-2:] = [wsum]
            lens[-2:] = [ln]
    return np.repeat(vals, lens)


@dataclass(frozen=True)
class MonotoneMap:
    """Non-decreasing map through ``(x, y)`` knots, constant outside them."""

    x: np.ndarray
    y: np.ndarray

    def __call__(self, v):
        return np.interp(v, self.x, self.y)

    def inverse(self, target):
        """Smallest input reaching ``target`` on the map (clamped to the knot range)."""
        target = np.asarray(target, dtype=np.float64)
        out = np.empty_like(target, dtype=np.float64).reshape(-1)
        for k, t in enumerate(target.reshape(-1)):
            if t <= self.y[0]:
                out[k] = self.x[0]
                continue
            if t >= self.y[-1]:
                j = int(np.argmax(self.y >= self.y[-1]))
                out[k] = self.x[j]
                continue
            j = int(np.searchsorted(self.y, t, side="left"))
            x0, x1, y0, y1 = self.x[j - 1], self.x[j], self.y[j - 1], self.y[j]
            out[k] = x0 if y1 == y0 else x0 + (t - y0) * (x1 - x0) / (y1 - y0)
        return out.reshape(target.shape) if target.ndim else float(out[0])

    def to_dict(self) -> dict:
        return {"x": self.x.tolist(), "y": self.y.tolist()}


def logp_quantile_calibration(targets, achieved) -> MonotoneMap:
    """Map requested logP anchors to achieved medians, forced non-decreasing.

    Anchors with equal targets are averaged; achieved values are then pooled
    (isotonic regression) and linearly interpolated.
    """
    t = np.asarray(targets, dtype=np.float64).reshape(-1)
    a = np.asarray(achieved, dtype=np.float64).reshape(-1)
    if t.shape != a.shape:
        raise ValueError("targets and achieved must pair up")
    xs = np.unique(t)
    if xs.size < 2:
        raise DegenerateInput("need at least two distinct anchors")
    ys = np.array([a[t == x].mean() for x in xs])
    ws = np.array([np.sum(t == x) for x in xs], dtype=np.float64)
    return MonotoneMap(xs, pool_adjacent_violators(ys, ws))
