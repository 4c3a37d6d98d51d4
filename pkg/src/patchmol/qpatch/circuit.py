"""Dense statevector simulation of the encode + entangling-layer circuit.

Qubit ``q`` is tensor axis ``q`` of the statevector, so in the flattened
amplitude vector qubit 0 is the most significant bit. States carry a
leading batch axis so many angle configurations can be simulated at once.
"""

from __future__ import annotations

import numpy as np

from patchmol.errors import ShapeMismatch


def _apply_1q(state: np.ndarray, q: int, u00, u01, u10, u11) -> np.ndarray:
    """Apply a batch of 2x2 gates (each entry shaped ``(B,)``) to qubit ``q``."""
    b = state.shape[0]
    n = state.ndim - 1
    s = state.reshape(b, 2**q, 2, 2 ** (n - q - 1))
    a0 = s[:, :, 0, :]
    a1 = s[:, :, 1, :]
    shp = (b, 1, 1)
    u00, u01, u10, u11 = (np.reshape(u, shp) for u in (u00, u01, u10, u11))
    out = np.empty_like(s)
    out[:, :, 0, :] = u00 * a0 + u01 * a1
    out[:, :, 1, :] = u10 * a0 + u11 * a1
    return out.reshape(state.shape)


def apply_ry(state, q, theta):
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    return _apply_1q(state, q, c, -s, s, c)


def apply_rx(state, q, theta):
    c = np.cos(theta / 2)
    s = -1j * np.sin(theta / 2)
    return _apply_1q(state, q, c, s, s, c)


def apply_rz(state, q, theta):
    zero = np.zeros_like(theta)
    return _apply_1q(state, q, np.exp(-0.5j * theta), zero, zero, np.exp(0.5j * theta))


def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    out = state.copy()
    idx = [slice(None)] * state.ndim
    idx[control + 1] = 1
    idx = tuple(idx)
    t_axis = target + 1 if target < control else target
    out[idx] = np.flip(state[idx], axis=t_axis)
    return out


def z_expectations(state: np.ndarray) -> np.ndarray:
    """``<Z_q>`` for every qubit, shape ``(B, n)``."""
    b = state.shape[0]
    n = state.ndim - 1
    p = (state.real**2 + state.imag**2).reshape((b,) + (2,) * n)
    out = np.empty((b, n))
    for q in range(n):
        axes = tuple(a for a in range(1, n + 1) if a != q + 1)
        m = p.sum(axis=axes) if axes else p
        out[:, q] = m[:, 0] - m[:, 1]
    return out


def run_circuit(theta_in: np.ndarray, alpha: np.ndarray, record_norms: bool = False):
    """Simulate a batch of circuits.

    Parameters
    ----------
    theta_in : (B, n) array
        RY encoding angles.
    alpha : (B, L, n, 3) or (L, n, 3) array
        RX, RY, RZ angles per layer and qubit.
    record_norms : bool
        If True, also return the statevector norms after encoding and after
        every layer, shape ``(B, L + 1)``.

    Returns
    -------
    state : (B, 2, ..., 2) complex array
    norms : (B, L + 1) array, only when ``record_norms``
    """
    theta_in = np.atleast_2d(np.asarray(theta_in, dtype=np.float64))
    bsz, n = theta_in.shape
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.ndim == 3:
        alpha = np.broadcast_to(alpha, (bsz,) + alpha.shape)
    if alpha.ndim != 4 or alpha.shape[0] != bsz or alpha.shape[2] != n or alpha.shape[3] != 3:
        raise ShapeMismatch(f"alpha shape {alpha.shape} incompatible with {n} qubits")
    n_layers = alpha.shape[1]
    state = np.zeros((bsz,) + (2,) * n, dtype=np.complex128)
    state[(slice(None),) + (0,) * n] = 1.0
    norms = []
    for q in range(n):
        state = apply_ry(state, q, theta_in[:, q])
    if record_norms:
        norms.append(np.sqrt(np.sum(np.abs(state.reshape(bsz, -1)) ** 2, axis=1)))
    for layer in range(n_layers):
        for q in range(n):
            state = apply_rx(state, q, alpha[:, layer, q, 0])
            state = apply_ry(state, q, alpha[:, layer, q, 1])
            state = apply_rz(state, q, alpha[:, layer, q, 2])
        if n > 1:
            for q in range(n):
                state = apply_cnot(state, q, (q + 1) % n)
        if record_norms:
            norms.append(np.sqrt(np.sum(np.abs(state.reshape(bsz, -1)) ** 2, axis=1)))
    if record_norms:
        return state, np.stack(norms, axis=1)
    return state


def simulate_expectations(angles_in, params) -> np.ndarray:
    """Pauli-Z expectations of every qubit for one encoding-angle vector.

    ``params`` may be a ``QuantumParams`` or a bare ``(L, n, 3)`` angle array.
    """
    alpha = params.alpha if hasattr(params, "alpha") else np.asarray(params, dtype=np.float64)
    angles_in = np.asarray(angles_in, dtype=np.float64)
    if angles_in.ndim != 1 or alpha.ndim != 3 or alpha.shape[1] != angles_in.shape[0]:
        raise ShapeMismatch(
            f"angles_in shape {angles_in.shape} incompatible with alpha shape {alpha.shape}"
        )
    return z_expectations(run_circuit(angles_in[None, :], alpha))[0]


def simulate_expectations_batch(theta_in: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    return z_expectations(run_circuit(theta_in, alpha))


def statevector(angles_in, alpha) -> np.ndarray:
    """Flattened final statevector (length ``2**n``) for one configuration."""
    st = run_circuit(np.asarray(angles_in)[None, :], alpha)
    return st.reshape(-1)
