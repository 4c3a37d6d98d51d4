"""Parameter-shift gradients of the circuit expectations."""

from __future__ import annotations

import numpy as np

from patchmol.errors import ShapeMismatch
from patchmol.qpatch.circuit import simulate_expectations_batch
from patchmol.qpatch.config import QuantumParams
from patchmol.qpatch.generator import encoding_angles

SHIFT = np.pi / 2


def shift_gradients(theta_in: np.ndarray, alpha: np.ndarray, upstream: np.ndarray):
    """Gradient of ``upstream . g`` w.r.t. every rotation angle.

    All ``2 * (n + 3 L n)`` shifted circuits are simulated as one batch.

    Returns
    -------
    d_theta : (n,) array
    d_alpha : (L, n, 3) array
    """
    theta_in = np.asarray(theta_in, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    upstream = np.asarray(upstream, dtype=np.float64)
    n = theta_in.shape[0]
    if upstream.shape != (n,) or alpha.ndim != 3 or alpha.shape[1:] != (n, 3):
        raise ShapeMismatch("upstream/alpha shapes do not match the qubit count")
    n_alpha = alpha.size
    p = n + n_alpha
    thetas = np.broadcast_to(theta_in, (2 * p, n)).copy()
    alphas = np.broadcast_to(alpha, (2 * p,) + alpha.shape).copy()
    flat = alphas.reshape(2 * p, -1)
    for k in range(p):
        for sign_row, sign in ((2 * k, 1.0), (2 * k + 1, -1.0)):
            if k < n:
                thetas[sign_row, k] += sign * SHIFT
            else:
                flat[sign_row, k - n] += sign * SHIFT
    g = simulate_expectations_batch(thetas, alphas)
    dg = (g[0::2] - g[1::2]) / 2.0  # (p, n)
    grad = dg @ upstream
    return grad[:n], grad[n:].reshape(alpha.shape)


def parameter_shift_grad(z: np.ndarray, params: QuantumParams, upstream: np.ndarray) -> dict:
    """Parameter-shift gradients for one latent vector.

    Returns a dict with ``theta_in`` and ``alpha`` angle gradients, plus the
    chained ``w_in`` and ``b_in`` gradients of the encoding map.
    """
    z = np.asarray(z, dtype=np.float64)
    theta = encoding_angles(z, params)[0]
    d_theta, d_alpha = shift_gradients(theta, params.alpha, upstream)
    return {
        "theta_in": d_theta,
        "alpha": d_alpha,
        "w_in": np.outer(z, d_theta),
        "b_in": d_theta.copy(),
    }
