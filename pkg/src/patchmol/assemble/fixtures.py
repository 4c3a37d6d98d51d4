"""Hand-built patches with known assemblies, used by tests and the docs."""

from __future__ import annotations

import numpy as np

from patchmol.assemble.proto import REST


def _patch(points2d: np.ndarray, n_nodes: int, f_node: int) -> np.ndarray:
    h = np.full((n_nodes, f_node), REST)
    k = len(points2d)
    h[:k, 0] = 0.9  # carbon channel, also marks the rows active
    h[:k, 1:3] = points2d
    return h


def hexagon_patch(n_nodes: int = 48, f_node: int = 16, a: float = 0.24, b: float = 0.28) -> np.ndarray:
    """Six carbons on a hexagon with alternating side lengths ``a`` and ``b``.

    Interior angles are all 120 degrees, so the short diagonals are longer
    than both the proximity threshold (with slack) and the coordinate window.
    The short sides come first in the upgrade order, giving one Kekule
    pattern.
    """
    pts = [np.zeros(2)]
    heading = 0.0
    for k in range(5):
        step = a if k % 2 == 0 else b
        pts.append(pts[-1] + step * np.array([np.cos(heading), np.sin(heading)]))
        heading += np.pi / 3
    pts = np.array(pts)
    pts += REST - pts.mean(axis=0)
    return _patch(pts, n_nodes, f_node)


def triangle_patch(n_nodes: int = 48, f_node: int = 16, side: float = 0.2) -> np.ndarray:
    """Three carbons on an equilateral triangle of the given side."""
    ang = np.array([90.0, 210.0, 330.0]) * np.pi / 180
    r = side / np.sqrt(3.0)
    pts = REST + r * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return _patch(pts, n_nodes, f_node)
