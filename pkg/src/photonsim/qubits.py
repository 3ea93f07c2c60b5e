"""Qubit-level linear algebra and the dual-rail photonic encoding.

Qubit ``k`` of a dual-rail register lives in modes ``(2k, 2k+1)``; logical 0 is a
photon in the first rail (horizontal) and logical 1 a photon in the second
(vertical).
"""

from __future__ import annotations

from functools import reduce
from itertools import product
from typing import Sequence

import numpy as np

from .fock import PureState

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CS = np.diag([1, 1, 1, -1]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
PAULIS = {"I": I2, "X": X, "Z": Z, "XZ": X @ Z}


def kron(*ops) -> np.ndarray:
    return reduce(np.kron, ops)


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def canonical_phase(v) -> np.ndarray:
    """Normalize and rotate the global phase so the largest amplitude is real and positive."""
    v = normalized(v)
    k = int(np.argmax(np.abs(v)))
    return v * np.exp(-1j * np.angle(v[k]))


def on_qubit(op: np.ndarray, k: int, n: int) -> np.ndarray:
    return kron(*[op if i == k else I2 for i in range(n)])


def cs_between(a: int, b: int, n: int) -> np.ndarray:
    diag = np.array([-1 if bits[a] == "1" and bits[b] == "1" else 1 for bits in _bitstrings(n)])
    return np.diag(diag).astype(complex)


def x_rotation(theta: float) -> np.ndarray:
    """cos(theta/2) I + i sin(theta/2) X."""
    return np.cos(theta / 2) * I2 + 1j * np.sin(theta / 2) * X


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    a, b = normalized(a), normalized(b)
    return float(abs(np.vdot(a, b)) ** 2)


def process_fidelity(kraus: np.ndarray, ideal: np.ndarray) -> float:
    """Fidelity of the trace-rescaled single-Kraus map ``kraus`` with the unitary ``ideal``."""
    d = ideal.shape[0]
    overlap = abs(np.trace(ideal.conj().T @ kraus)) ** 2
    return float(overlap / (d * np.trace(kraus.conj().T @ kraus).real))


def random_qubit(rng: np.random.Generator, n: int = 1) -> np.ndarray:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return normalized(v)


def _bitstrings(n: int):
    return ["".join(b) for b in product("01", repeat=n)]


def dual_rail(vector: Sequence[complex], cutoff: int | None = None) -> PureState:
    """Photonic dual-rail state for a qubit-register amplitude vector."""
    vector = np.asarray(vector, dtype=complex)
    n = int(round(np.log2(vector.size)))
    if 2**n != vector.size:
        raise ValueError("amplitude vector length must be a power of two")
    terms = {}
    for bits, amp in zip(_bitstrings(n), vector):
        terms[tuple(x for b in bits for x in ((1, 0) if b == "0" else (0, 1)))] = amp
    return PureState.from_terms(2 * n, terms, cutoff if cutoff is not None else max(n, 6))


def from_dual_rail(psi: PureState, qubit_modes: Sequence[tuple[int, int]] | None = None) -> np.ndarray:
    """Amplitudes of the dual-rail logical subspace (unnormalized; leakage is dropped).

    Any modes not listed in ``qubit_modes`` must be in a common product state.
    """
    if qubit_modes is None:
        qubit_modes = [(2 * k, 2 * k + 1) for k in range(psi.mode_count // 2)]
    listed = {m for pair in qubit_modes for m in pair}
    others = [i for i in range(psi.mode_count) if i not in listed]
    n = len(qubit_modes)
    out = np.zeros(2**n, dtype=complex)
    tails = set()
    for occ, amp in psi.terms.items():
        bits = []
        for a, b in qubit_modes:
            if (occ[a], occ[b]) == (1, 0):
                bits.append("0")
            elif (occ[a], occ[b]) == (0, 1):
                bits.append("1")
            else:
                break
        else:
            tails.add(tuple(occ[i] for i in others))
            out[int("".join(bits), 2) if bits else 0] += amp
    if len(tails) > 1:
        raise ValueError("spectator modes are entangled with the qubits")
    return out


def single_rail(vector: Sequence[complex], cutoff: int | None = None) -> PureState:
    """Single-rail register: logical value = photon number of the mode."""
    vector = np.asarray(vector, dtype=complex)
    n = int(round(np.log2(vector.size)))
    terms = {tuple(int(b) for b in bits): amp for bits, amp in zip(_bitstrings(n), vector)}
    return PureState.from_terms(n, terms, cutoff if cutoff is not None else max(n, 6))


def from_single_rail(psi: PureState, modes: Sequence[int]) -> np.ndarray:
    others = [i for i in range(psi.mode_count) if i not in modes]
    out = np.zeros(2 ** len(modes), dtype=complex)
    tails = set()
    for occ, amp in psi.terms.items():
        bits = [occ[m] for m in modes]
        if all(b in (0, 1) for b in bits):
            tails.add(tuple(occ[i] for i in others))
            out[int("".join(map(str, bits)), 2) if bits else 0] += amp
    if len(tails) > 1:
        raise ValueError("spectator modes are entangled with the qubits")
    return out
