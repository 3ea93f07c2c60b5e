"""Parity-encoded qubits, type-II fusion and the retry statistics they enable."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import gates
from . import kernels
from . import measurement as ms
from . import qubits as qb


def parity_codeword(bit: int, n: int) -> np.ndarray:
    """|0> is the uniform superposition of even-weight strings, |1> of odd-weight ones."""
    v = np.array([1.0 if sum(b) % 2 == bit else 0.0 for b in product((0, 1), repeat=n)], dtype=complex)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class ParityEncodedQubit:
    vector: np.ndarray

    @property
    def n(self) -> int:
        return int(round(np.log2(self.vector.size)))

    def logical(self, tol: float = 1e-10) -> np.ndarray:
        """(alpha, beta) of the encoded qubit; raises if the state leaves the code space."""
        zero, one = parity_codeword(0, self.n), parity_codeword(1, self.n)
        coeffs = np.array([np.vdot(zero, self.vector), np.vdot(one, self.vector)])
        residual = self.vector - coeffs[0] * zero - coeffs[1] * one
        if np.linalg.norm(residual) > tol * max(1.0, np.linalg.norm(self.vector)):
            raise ValueError("state is outside the parity code space")
        return coeffs


def parity_encode(qubit, n: int) -> ParityEncodedQubit:
    alpha, beta = qb.normalized(qubit)
    return ParityEncodedQubit(alpha * parity_codeword(0, n) + beta * parity_codeword(1, n))


def parity_encode_2(qubit, cnot: str = "ideal") -> tuple[ParityEncodedQubit, float]:
    """Two-qubit parity code from a CNOT with a diagonal-state control.

    Returns the encoded state and the probability that the CNOT worked (1 for
    the ideal gate, 1/9 for the coincidence-basis gate).
    """
    plus = qb.normalized([1, 1])
    joint = np.kron(plus, qb.normalized(qubit))
    if cnot == "ideal":
        return ParityEncodedQubit(qb.CNOT @ joint), 1.0
    if cnot == "coincidence":
        results = gates.coincidence_cnot(joint)
    elif cnot == "klm":
        results = gates.klm_heralded_cnot(joint)
    else:
        raise ValueError(f"unknown CNOT implementation {cnot!r}")
    win = next(r for r in results if r.success)
    return ParityEncodedQubit(win.state), win.probability


def parity_x_rotation(code: ParityEncodedQubit, theta: float, qubit: int = 0) -> ParityEncodedQubit:
    """Logical X rotation: the single-qubit rotation on any one physical qubit."""
    return ParityEncodedQubit(qb.on_qubit(qb.x_rotation(theta), qubit, code.n) @ code.vector)


def parity_z(code: ParityEncodedQubit) -> ParityEncodedQubit:
    """Logical Z: Z on every physical qubit."""
    return ParityEncodedQubit(qb.kron(*[qb.Z] * code.n) @ code.vector)


@dataclass(frozen=True)
class ZMeasurement:
    value: int
    probability: float
    code: ParityEncodedQubit
    corrected: bool


def parity_z_measure(code: ParityEncodedQubit, qubit: int) -> list[ZMeasurement]:
    """Measure one physical qubit in the computational basis.

    The remaining qubits still hold the logical state; a result of 1 flips it,
    which is undone by X on one remaining qubit.
    """
    n = code.n
    if n < 2:
        raise ValueError("measuring the last physical qubit destroys the logical state")
    tensor = code.vector.reshape((2,) * n)
    out = []
    for value in (0, 1):
        rest = np.take(tensor, value, axis=qubit).reshape(-1)
        p = float(np.vdot(rest, rest).real)
        if p < 1e-15:
            continue
        rest = rest / np.sqrt(p)
        if value == 1:
            rest = qb.on_qubit(qb.X, 0, n - 1) @ rest
        out.append(ZMeasurement(value, p, ParityEncodedQubit(rest), value == 1))
    return out


def _split_product(vector: np.ndarray, left: int) -> tuple[np.ndarray, np.ndarray]:
    mat = vector.reshape(2**left, -1)
    u, s, vh = np.linalg.svd(mat)
    if s.size > 1 and s[1] > 1e-9 * s[0]:
        raise ValueError("blocks are entangled")
    return u[:, 0] * s[0], vh[0]


@dataclass(frozen=True)
class FusionResult:
    success: bool
    probability: float
    code: ParityEncodedQubit | None
    resource: ParityEncodedQubit | None
    outcome: str


def fusion_type_II(code: ParityEncodedQubit, n: int) -> list[FusionResult]:
    """Fuse an m-qubit parity code with a fresh |0> code of n + 2 qubits.

    The last qubit of ``code`` and the first qubit of the resource meet in the
    polarizing Bell analyzer (dual-rail photons).  PhiPlus/PhiMinus grow the code
    to m + n qubits; the separable outcomes leave m - 1 qubits plus an (n+1)-qubit
    resource, and for m = 1 the logical state is lost.
    """
    m = code.n
    if n < 0:
        raise ValueError("resource size must be non-negative")
    resource = parity_codeword(0, n + 2)
    joint = np.kron(code.vector, resource)
    psi = qb.dual_rail(joint)
    q, r = m - 1, m
    records = ms.analyze(psi, [2 * q, 2 * q + 1, 2 * r, 2 * r + 1], "polarizing")
    merged: dict[str, FusionResult] = {}
    for rec in records:
        kind = rec.outcome.kind
        vec = qb.from_dual_rail(rec.state)
        vec = vec / np.linalg.norm(vec)
        label = str(rec.outcome)
        if kind in (ms.Bell.PHI_PLUS, ms.Bell.PHI_MINUS):
            if kind is ms.Bell.PHI_MINUS:
                # phase flip: logical Z on the qubits that came from the resource
                tail = qb.kron(*([qb.I2] * (m - 1) + [qb.Z] * (n + 1)))
                vec = tail @ vec
            result = FusionResult(True, rec.probability, ParityEncodedQubit(vec), None, label)
        elif m == 1:
            result = FusionResult(False, rec.probability, None, None, label)
        else:
            left, right = _split_product(vec, m - 1)
            if rec.outcome.record == "VH":
                left = qb.on_qubit(qb.X, 0, m - 1) @ left
            else:
                right = qb.on_qubit(qb.X, 0, n + 1) @ right
            result = FusionResult(
                False, rec.probability, ParityEncodedQubit(qb.canonical_phase(left)),
                ParityEncodedQubit(qb.canonical_phase(right)), label,
            )
        prev = merged.get(label)
        if prev is not None:
            result = FusionResult(result.success, result.probability + prev.probability,
                                  result.code, result.resource, label)
        merged[label] = result
    return list(merged.values())


def fusion_expected_change(n: int, trials: int, rng: np.random.Generator, start: int = 10) -> float:
    """Monte Carlo mean code-length change for one fusion attempt with an (n+2)-qubit resource."""
    draws = rng.random((trials, 1))
    final = kernels.fusion_walk(draws, start, n + 2)
    return float(np.mean(final - start))


def fusion_walk(start: int, n: int, steps: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Code lengths after repeated fusion attempts; length 1 is absorbing."""
    return kernels.fusion_walk(rng.random((trials, steps)), start, n + 2)


def encoded_cs_success(teleporter_success: float = 2 / 3) -> float:
    """Closed form of the retry model used by ``encoded_cs_monte_carlo``."""
    block = teleporter_success**2 * (3 - 2 * teleporter_success)
    return block**2


def encoded_cs_monte_carlo(
    trials: int, rng: np.random.Generator, teleporter_success: float = 2 / 3
) -> dict[str, float]:
    """Success rate of a CS gate on two-qubit parity-encoded inputs versus bare qubits.

    Model: each logical block must have both of its physical qubits teleported
    through the gate.  A teleporter failure only measures one physical qubit in
    the computational basis, which the code survives, so each block may absorb
    one failure and retry with a fresh teleporter; a second failure in the same
    block loses it.  The bare gate needs both of its single teleporters to work.
    """
    draws = rng.random((trials, 2, 3))
    a = kernels.two_budget_game(draws[:, 0, :], teleporter_success)
    b = kernels.two_budget_game(draws[:, 1, :], teleporter_success)
    bare = (draws[:, 0, 0] < teleporter_success) & (draws[:, 1, 0] < teleporter_success)
    return {"encoded": float(np.mean(a & b)), "unencoded": float(np.mean(bare))}
