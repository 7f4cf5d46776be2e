"""Ground-truth evaluators: exhaustive SopCount and a dense statevector."""

from __future__ import annotations

import os
from itertools import product

import numpy as np

from .circuit import Circuit
from .dp import ResidueCounts, root_of_unity
from .errors import ResourceCapError, ValidationError
from .sop import SopInstance, _as_bits, evaluate_f

BRUTE_CAP = int(os.environ.get("SOPSIM_BRUTE_CAP", "24"))
STATEVECTOR_CAP = int(os.environ.get("SOPSIM_STATEVECTOR_CAP", "24"))

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def sopcount_brute(s: SopInstance, max_vars: int | None = None) -> ResidueCounts:
    cap = BRUTE_CAP if max_vars is None else max_vars
    if not s.consistent:
        raise ValidationError("instance is inconsistent: amplitude is exactly 0, no counts exist")
    if s.n_vars > cap:
        raise ResourceCapError(f"brute force capped at {cap} variables, instance has {s.n_vars}")
    counts = [0] * s.r
    for x in product((0, 1), repeat=s.n_vars):
        counts[evaluate_f(s, x)] += 1
    return ResidueCounts(s.r, tuple(counts))


def apply_gate(state: np.ndarray, gate, r: int) -> np.ndarray:
    """Apply one gate to a state of shape (2,)*n; axis i is qubit i."""
    if gate.kind == "h":
        q = gate.qubits[0]
        return np.moveaxis(np.tensordot(_H, state, axes=([1], [q])), 0, q)
    state = state.copy()
    if gate.kind == "cz":
        a, b = gate.qubits
        idx = [slice(None)] * state.ndim
        idx[a] = 1
        idx[b] = 1
        state[tuple(idx)] *= -1
        return state
    q = gate.qubits[0]
    idx = [slice(None)] * state.ndim
    idx[q] = 0
    state[tuple(idx)] *= root_of_unity(r, gate.p0)
    idx[q] = 1
    state[tuple(idx)] *= root_of_unity(r, gate.p1)
    return state


def run_statevector(c: Circuit, in_bits) -> np.ndarray:
    if c.n_qubits > STATEVECTOR_CAP:
        raise ResourceCapError(f"statevector capped at {STATEVECTOR_CAP} qubits, circuit has {c.n_qubits}")
    y = _as_bits(in_bits, c.n_qubits, "input bits")
    state = np.zeros((2,) * c.n_qubits, dtype=complex)
    state[y] = 1.0
    for g in c.gates:
        state = apply_gate(state, g, c.modulus)
    return state


def statevector_amplitude(c: Circuit, in_bits, out_bits) -> complex:
    z = _as_bits(out_bits, c.n_qubits, "output bits")
    return complex(run_statevector(c, in_bits)[z])
