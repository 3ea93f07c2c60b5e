"""Passive linear optics: mode unitaries and their action on Fock states.

Column convention throughout: a single photon in mode ``i`` leaves in the
superposition ``sum_j U[j, i] |j>``, so on the one-photon sector ``apply`` is
ordinary matrix-vector multiplication by ``U``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .fock import PureState

UNITARITY_TOL = 1e-10


def beamsplitter_unitary(eta: float, theta: float = 0.0, phi: float = 0.0) -> np.ndarray:
    """Two-mode beamsplitter with intensity reflectivity ``eta``.

    ``eta`` is the probability that a photon keeps its mode label; ``theta`` and
    ``phi`` are the phases on the two cross-couplings.
    """
    if not 0 <= eta <= 1:
        raise ValueError("reflectivity must lie in [0, 1]")
    r, t = math.sqrt(eta), math.sqrt(1 - eta)
    return np.array(
        [
            [r, np.exp(1j * theta) * t],
            [np.exp(1j * phi) * t, -np.exp(1j * (theta + phi)) * r],
        ],
        dtype=complex,
    )


def balanced_beamsplitter() -> np.ndarray:
    return beamsplitter_unitary(0.5)


def phase_shift(phase: float) -> np.ndarray:
    return np.array([[np.exp(1j * phase)]])


def waveplate_unitary(kind: str, angle: float) -> np.ndarray:
    """Jones matrix on (H, V) of a wave plate with its fast axis at ``angle`` radians.

    Global phases are dropped, so a half-wave plate at 0 is diag(1, -1) and at
    22.5 degrees is the Hadamard matrix.
    """
    retardance = {"half": math.pi, "quarter": math.pi / 2}.get(kind)
    if retardance is None:
        raise ValueError(f"unknown wave plate {kind!r}")
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, s], [-s, c]])
    return rot.T @ np.diag([1, np.exp(1j * retardance)]) @ rot


def tritter_unitary() -> np.ndarray:
    """Symmetric three-port splitter (the 3x3 discrete Fourier transform)."""
    w = np.exp(2j * math.pi / 3)
    return np.array([[w ** (j * k) for k in range(3)] for j in range(3)]) / math.sqrt(3)


def dft_unitary(n: int) -> np.ndarray:
    w = np.exp(2j * math.pi / n)
    return np.array([[w ** (j * k) for k in range(n)] for j in range(n)]) / math.sqrt(n)


def mode_swap() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def polarizing_beamsplitter() -> np.ndarray:
    """PBS on (a_H, a_V, b_H, b_V): horizontal light is transmitted, vertical swaps ports."""
    return embed(mode_swap(), [1, 3], 4)


def check_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("mode transformation must be a square matrix")
    err = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if err > tol:
        raise ValueError(f"matrix is not unitary (deviation {err:.2e})")


def embed(u: np.ndarray, modes: Sequence[int], mode_count: int) -> np.ndarray:
    """Identity on ``mode_count`` modes with ``u`` acting on ``modes``."""
    modes = list(modes)
    if len(set(modes)) != len(modes) or max(modes) >= mode_count or min(modes) < 0:
        raise ValueError(f"invalid target modes {modes}")
    full = np.eye(mode_count, dtype=complex)
    full[np.ix_(modes, modes)] = u
    return full


def _active_modes(u: np.ndarray) -> list[int]:
    off = np.abs(u - np.eye(u.shape[0])) > 1e-15
    return [i for i in range(u.shape[0]) if off[i].any() or off[:, i].any()]


def apply(u: np.ndarray, psi: PureState, modes: Sequence[int] | None = None) -> PureState:
    """Transform ``psi`` by the linear-optical network ``u``.

    With ``modes`` given, ``u`` acts on those modes only; otherwise it must span all
    modes of ``psi``.  Each photon-number sector of the touched modes is mapped by
    the exact multi-photon transfer matrix from ``kernels.sector_transform``.
    """
    u = np.asarray(u, dtype=complex)
    check_unitary(u)
    if modes is None:
        if u.shape[0] != psi.mode_count:
            raise ValueError(f"unitary is {u.shape[0]}x{u.shape[0]} but state has {psi.mode_count} modes")
        modes = list(range(psi.mode_count))
    else:
        modes = list(modes)
        if len(modes) != u.shape[0]:
            raise ValueError("number of target modes does not match the unitary")
        if len(set(modes)) != len(modes) or max(modes) >= psi.mode_count or min(modes) < 0:
            raise ValueError(f"invalid target modes {modes}")
    active = _active_modes(u)
    if not active:
        return psi
    local_u = u[np.ix_(active, active)]
    targets = [modes[i] for i in active]
    return _apply_local(local_u, targets, psi)


def _apply_local(u: np.ndarray, targets: list[int], psi: PureState) -> PureState:
    width = len(targets)
    out: dict[tuple, complex] = {}
    grouped: dict[int, list] = {}
    for occ, amp in psi.terms.items():
        local = tuple(occ[m] for m in targets)
        grouped.setdefault(sum(local), []).append((occ, local, amp))
    for photons, entries in grouped.items():
        basis = kernels.sector_basis(photons, width)
        matrix = kernels.sector_transform(u, photons)
        for occ, local, amp in entries:
            column = matrix[:, kernels.sector_rank(local, width)]
            base = list(occ)
            for row in np.flatnonzero(np.abs(column) > 1e-16):
                for m, n in zip(targets, basis[row]):
                    base[m] = int(n)
                key = tuple(base)
                out[key] = out.get(key, 0j) + amp * column[row]
    return PureState.from_terms(psi.mode_count, out, psi.cutoff)


@dataclass
class ElementSpec:
    """One optical element of a circuit description.

    ``kind`` is one of beamsplitter, waveplate, phase, tritter, swap, pbs, unitary.
    """

    kind: str
    modes: list[int]
    params: dict = field(default_factory=dict)

    def matrix(self) -> np.ndarray:
        p = self.params
        if self.kind == "beamsplitter":
            return beamsplitter_unitary(p.get("eta", 0.5), p.get("theta", 0.0), p.get("phi", 0.0))
        if self.kind == "waveplate":
            angle = p["angle_deg"] * math.pi / 180 if "angle_deg" in p else p.get("angle", 0.0)
            return waveplate_unitary(p.get("type", "half"), angle)
        if self.kind == "phase":
            return phase_shift(p["phase"])
        if self.kind == "tritter":
            return tritter_unitary()
        if self.kind == "swap":
            return mode_swap()
        if self.kind == "pbs":
            return polarizing_beamsplitter()
        if self.kind == "unitary":
            re = np.asarray(p["re"], dtype=float)
            im = np.asarray(p.get("im", np.zeros_like(re)), dtype=float)
            return re + 1j * im
        raise ValueError(f"unknown element kind {self.kind!r}")

    @classmethod
    def from_dict(cls, data: dict) -> ElementSpec:
        if "kind" not in data or "modes" not in data:
            raise ValueError(f"element needs 'kind' and 'modes': {data}")
        return cls(data["kind"], [int(m) for m in data["modes"]], dict(data.get("params", {})))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "modes": self.modes, "params": self.params}


def load_circuit(text: str) -> list[ElementSpec]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("elements", [])
    return [ElementSpec.from_dict(d) for d in data]


def run_circuit(elements: Sequence[ElementSpec], psi: PureState) -> PureState:
    for el in elements:
        psi = apply(el.matrix(), psi, el.modes)
    return psi


def circuit_unitary(elements: Sequence[ElementSpec], mode_count: int) -> np.ndarray:
    total = np.eye(mode_count, dtype=complex)
    for el in elements:
        total = embed(el.matrix(), el.modes, mode_count) @ total
    return total
