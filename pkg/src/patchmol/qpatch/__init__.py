"""Simulated circuit patch generator, its gradients and the classical ablation head."""

from patchmol.qpatch.circuit import run_circuit, simulate_expectations, statevector
from patchmol.qpatch.classical import (
    ClassicalParams,
    classical_head_forward,
    init_classical_params,
    zero_classical_params,
)
from patchmol.qpatch.config import QuantumConfig, QuantumParams, init_quantum_params
from patchmol.qpatch.generator import generate_patch, generate_patches, standardize_readout
from patchmol.qpatch.gradients import parameter_shift_grad, shift_gradients
from patchmol.qpatch.heads import PatchHead, classical_head, quantum_head

__all__ = [
    "ClassicalParams",
    "PatchHead",
    "QuantumConfig",
    "QuantumParams",
    "classical_head",
    "classical_head_forward",
    "generate_patch",
    "generate_patches",
    "init_classical_params",
    "init_quantum_params",
    "parameter_shift_grad",
    "quantum_head",
    "run_circuit",
    "shift_gradients",
    "simulate_expectations",
    "standardize_readout",
    "statevector",
    "zero_classical_params",
]
