"""Single-qubit X rotations driven by measurements on a three-qubit cluster."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qubits as qb

# frame applied for (first result, second result); 0 is the "+" vector, 1 the "-" one
FRAMES = {(0, 0): "I", (0, 1): "X", (1, 0): "Z", (1, 1): "XZ"}


def cluster_state(qubit) -> np.ndarray:
    """Input qubit followed by two |+> qubits, linked in a line by CS gates."""
    plus = qb.normalized([1, 1])
    v = qb.kron(qb.normalized(qubit), plus, plus)
    return qb.cs_between(1, 2, 3) @ qb.cs_between(0, 1, 3) @ v


def _diagonal_basis():
    return [qb.normalized([1, 1]), qb.normalized([-1, 1])]


def _rotated_basis(theta: float):
    return [qb.normalized([1, np.exp(1j * theta)]), qb.normalized([-1, np.exp(1j * theta)])]


@dataclass(frozen=True)
class ClusterBranch:
    results: tuple[int, int]
    probability: float
    frame: str
    state: np.ndarray


def cluster_x_rotation(qubit, theta: float) -> list[ClusterBranch]:
    """All four measurement branches; each ``state`` is already frame-corrected.

    Qubit 1 is measured in the diagonal basis; qubit 2 in the basis
    |0> +/- e^{i theta'}|1> with theta' = theta, or -theta when qubit 1 gave the
    second outcome.  The last qubit ends in X_theta applied to the input.
    """
    psi = cluster_state(qubit).reshape(2, 2, 2)
    out = []
    for r1, d in enumerate(_diagonal_basis()):
        after_first = np.tensordot(d.conj(), psi, axes=(0, 0))
        angle = theta if r1 == 0 else -theta
        for r2, rvec in enumerate(_rotated_basis(angle)):
            last = np.tensordot(rvec.conj(), after_first, axes=(0, 0))
            p = float(np.vdot(last, last).real)
            frame = FRAMES[(r1, r2)]
            fixed = qb.PAULIS[frame] @ last
            out.append(ClusterBranch((r1, r2), p, frame, qb.canonical_phase(fixed)))
    return out


def sample_cluster_x_rotation(qubit, theta: float, rng: np.random.Generator) -> ClusterBranch:
    branches = cluster_x_rotation(qubit, theta)
    p = np.array([b.probability for b in branches])
    return branches[rng.choice(len(branches), p=p / p.sum())]
