"""Latent vector to patch tensor through the simulated circuit."""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from patchmol.errors import ShapeMismatch
from patchmol.qpatch.circuit import simulate_expectations_batch
from patchmol.qpatch.config import QuantumParams


def _check_latent(z: np.ndarray, latent_dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z[None, :]
    if z.ndim != 2 or z.shape[1] != latent_dim:
        raise ShapeMismatch(f"latent has shape {z.shape}, expected (*, {latent_dim})")
    if not np.all(np.isfinite(z)):
        raise ValueError("latent contains non-finite values")
    return z


def encoding_angles(z: np.ndarray, params: QuantumParams) -> np.ndarray:
    z = _check_latent(z, params.config.latent_dim)
    return z @ params.w_in + params.b_in


def expectations_batch(z: np.ndarray, params: QuantumParams) -> np.ndarray:
    return simulate_expectations_batch(encoding_angles(z, params), params.alpha)


def generate_patches(z: np.ndarray, params: QuantumParams) -> np.ndarray:
    """Patch tensors for a batch of latents, shape ``(B, n_nodes, f_node)``."""
    c = params.config
    g = expectations_batch(z, params)
    h = expit(g @ params.w_post + params.b_post)
    return h.reshape(-1, c.n_nodes, c.f_node)


def generate_patch(z: np.ndarray, params: QuantumParams) -> np.ndarray:
    """Patch tensor ``(n_nodes, f_node)`` for a single latent vector."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1:
        raise ShapeMismatch(f"expected a single latent vector, got shape {z.shape}")
    return generate_patches(z, params)[0]


def standardize_readout(
    params: QuantumParams, z_sample: np.ndarray, gain: float = 1.0, floor: float = 1e-6
) -> QuantumParams:
    """Rescale the readout so its pre-activations have spread ``gain``.

    Random circuits produce expectations that barely move with the latent,
    so a freshly initialised readout yields near-constant patches. The
    expectations over ``z_sample`` are standardised per qubit and the
    standardisation is folded into ``w_post`` and ``b_post``; the readout
    keeps its affine-plus-sigmoid form. With the default uniform init the
    pre-activations then have standard deviation close to ``gain``.
    """
    g = expectations_batch(z_sample, params)
    if g.shape[0] < 2:
        raise ValueError("need at least two latent samples")
    mu = g.mean(axis=0)
    sd = np.maximum(g.std(axis=0), floor)
    # uniform(+-1/sqrt(n)) rows give unit-variance inputs a spread of 1/sqrt(3)
    w = params.w_post * (gain * np.sqrt(3.0) / sd)[:, None]
    b = params.b_post - mu / sd @ (params.w_post * gain * np.sqrt(3.0))
    return params.replace(w_post=w, b_post=b)
