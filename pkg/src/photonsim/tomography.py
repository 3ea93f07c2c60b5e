"""Polarization state and process tomography from photon counts."""

from __future__ import annotations

import csv
import io
import json
from itertools import product
from typing import Callable, Mapping

import numpy as np

from . import qubits as qb

S0 = np.eye(2, dtype=complex)
S1 = np.diag([1, -1]).astype(complex)
S2 = np.array([[0, 1], [1, 0]], dtype=complex)
S3 = np.array([[0, -1j], [1j, 0]], dtype=complex)
STOKES = [S0, S1, S2, S3]

# analyzer setting for Stokes index 1..3, with the eigenvectors of the +1 and -1 outcomes
SETTINGS = {
    "HV": (qb.normalized([1, 0]), qb.normalized([0, 1])),
    "DA": (qb.normalized([1, 1]), qb.normalized([1, -1])),
    "RL": (qb.normalized([1, 1j]), qb.normalized([1, -1j])),
}
SETTING_OF = {1: "HV", 2: "DA", 3: "RL"}
OUTCOME_LABELS = {"HV": ("H", "V"), "DA": ("D", "A"), "RL": ("R", "L")}
INPUT_STATES = {
    "H": qb.normalized([1, 0]),
    "V": qb.normalized([0, 1]),
    "D": qb.normalized([1, 1]),
    "R": qb.normalized([1, 1j]),
}

Counts = Mapping[tuple[str, str], float]


def stokes_operator(index: tuple[int, ...]) -> np.ndarray:
    return qb.kron(*[STOKES[i] for i in index])


def single_qubit_stokes(counts: Counts, normalization: str = "printed") -> np.ndarray:
    """<S0..S3> of one qubit from counts keyed by (setting, outcome label).

    ``printed`` divides every setting by the H + V total and only needs the
    first detector of the DA and RL settings; ``per_basis`` normalizes each
    setting by its own total.
    """
    c = lambda s, o: float(counts.get((s, o), 0.0))
    hv = c("HV", "H") + c("HV", "V")
    if hv <= 0:
        raise ValueError("no counts in the HV setting")
    out = [1.0, (c("HV", "H") - c("HV", "V")) / hv]
    for setting in ("DA", "RL"):
        plus, minus = OUTCOME_LABELS[setting]
        if normalization == "printed":
            out.append(2 * c(setting, plus) / hv - 1)
        elif normalization == "per_basis":
            total = c(setting, plus) + c(setting, minus)
            if total <= 0:
                raise ValueError(f"no counts in the {setting} setting")
            out.append((c(setting, plus) - c(setting, minus)) / total)
        else:
            raise ValueError(f"unknown normalization {normalization!r}")
    return np.array(out)


def stokes_expectations(counts: Counts, n: int, normalization: str = "per_basis") -> dict:
    """All 4^n Stokes products from counts over the 3^n analyzer settings.

    Keys of ``counts`` are (setting, outcome) with comma-joined per-qubit labels,
    e.g. ("HV,DA", "H,A").  Identity positions are averaged over every setting
    that fixes the other positions.  ``reference`` divides each setting by the
    total of the all-HV setting, the multi-qubit analogue of the printed rule.
    """
    table: dict[str, dict[tuple[str, ...], float]] = {}
    for (setting, outcome), value in counts.items():
        table.setdefault(setting, {})[tuple(outcome.split(","))] = float(value)
    reference = None
    if normalization == "reference":
        reference = sum(table.get(",".join(["HV"] * n), {}).values())
        if reference <= 0:
            raise ValueError("no counts in the reference setting")
    elif normalization != "per_basis":
        raise ValueError(f"unknown normalization {normalization!r}")
    result = {}
    for index in product(range(4), repeat=n):
        if not any(index):
            result[index] = 1.0
            continue
        choices = [[SETTING_OF[i]] if i else ["HV", "DA", "RL"] for i in index]
        values = []
        for combo in product(*choices):
            key = ",".join(combo)
            data = table.get(key)
            if not data:
                continue
            total = reference if reference is not None else sum(data.values())
            acc = 0.0
            for outcome, value in data.items():
                sign = 1
                for i, (s, o) in enumerate(zip(combo, outcome)):
                    if index[i] and o == OUTCOME_LABELS[s][1]:
                        sign = -sign
                acc += sign * value
            values.append(acc / total)
        if not values:
            raise ValueError(f"no setting measures Stokes product {index}")
        result[index] = float(np.mean(values))
    return result


def linear_inversion(expectations: Mapping[tuple[int, ...], float], n: int) -> np.ndarray:
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for index, value in expectations.items():
        rho += value * stokes_operator(index)
    return rho / 2**n


def _simplex(values: np.ndarray) -> np.ndarray:
    # Euclidean projection onto {x >= 0, sum x = 1}
    u = np.sort(values)[::-1]
    css = np.cumsum(u)
    k = np.nonzero(u * np.arange(1, u.size + 1) > css - 1)[0][-1]
    tau = (css[k] - 1) / (k + 1)
    return np.maximum(values - tau, 0)


def ml_project(rho: np.ndarray) -> np.ndarray:
    """Closest physical density matrix: Hermitian part with eigenvalues moved onto the simplex."""
    herm = (rho + rho.conj().T) / 2
    vals, vecs = np.linalg.eigh(herm)
    fixed = _simplex(vals)
    return (vecs * fixed) @ vecs.conj().T


def fidelity(rho: np.ndarray, phi: np.ndarray) -> float:
    phi = qb.normalized(phi)
    return float(np.vdot(phi, rho @ phi).real)


def simulate_counts(
    rho: np.ndarray, shots_per_setting: int, rng: np.random.Generator
) -> dict[tuple[str, str], int]:
    """Multinomial counts for every product analyzer setting."""
    n = int(round(np.log2(rho.shape[0])))
    counts = {}
    for combo in product(SETTINGS, repeat=n):
        labels = []
        probs = []
        for outcome in product((0, 1), repeat=n):
            vec = qb.kron(*[SETTINGS[s][o] for s, o in zip(combo, outcome)])
            probs.append(max(0.0, float(np.vdot(vec, rho @ vec).real)))
            labels.append(",".join(OUTCOME_LABELS[s][o] for s, o in zip(combo, outcome)))
        probs = np.array(probs)
        drawn = rng.multinomial(shots_per_setting, probs / probs.sum())
        for label, k in zip(labels, drawn):
            counts[(",".join(combo), label)] = int(k)
    return counts


def counts_to_csv(counts: Counts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["setting", "outcome", "count"])
    for (setting, outcome), value in counts.items():
        w.writerow([setting, outcome, value])
    return buf.getvalue()


def counts_from_csv(text: str) -> dict[tuple[str, str], float]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"setting", "outcome", "count"} <= set(reader.fieldnames):
        raise ValueError("counts CSV needs setting, outcome and count columns")
    counts: dict[tuple[str, str], float] = {}
    for row in reader:
        key = (row["setting"].strip(), row["outcome"].strip())
        counts[key] = counts.get(key, 0.0) + float(row["count"])
    return counts


def qubits_in_counts(counts: Counts) -> int:
    sizes = {len(setting.split(",")) for setting, _ in counts}
    if len(sizes) != 1:
        raise ValueError("settings disagree on the number of qubits")
    return sizes.pop()


def reconstruct(counts: Counts, normalization: str = "per_basis", physical: bool = True) -> np.ndarray:
    n = qubits_in_counts(counts)
    if n == 1 and normalization == "printed":
        flat = {(s, o): v for (s, o), v in counts.items()}
        stokes = single_qubit_stokes(flat, "printed")
        rho = sum(v * S for v, S in zip(stokes, STOKES)) / 2
    else:
        rho = linear_inversion(stokes_expectations(counts, n, normalization), n)
    return ml_project(rho) if physical else rho


def matrix_to_json(m: np.ndarray, name: str = "rho") -> str:
    return json.dumps({name: {"re": m.real.tolist(), "im": m.imag.tolist()}})


def process_tomography(channel: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Process matrix w with channel(rho) = sum_ij w_ij S_i rho S_j (Stokes basis).

    The channel is probed with every product of H, V, D, R inputs and the
    linear system is inverted.  The result is rescaled to unit trace, so a
    post-selected channel is described conditional on success.
    """
    ops = [stokes_operator(idx) for idx in product(range(4), repeat=n)]
    rows, rhs = [], []
    for labels in product(INPUT_STATES, repeat=n):
        psi = qb.kron(*[INPUT_STATES[l] for l in labels])
        rho = np.outer(psi, psi.conj())
        out = channel(rho)
        rows.append(np.array([(a @ rho @ b).ravel() for a in ops for b in ops]).T)
        rhs.append(out.ravel())
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    w, *_ = np.linalg.lstsq(a, b, rcond=None)
    w = w.reshape(len(ops), len(ops))
    return w / np.trace(w)


def unitary_channel(u: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    return lambda rho: u @ rho @ u.conj().T


def process_fidelity_w(w: np.ndarray, ideal: np.ndarray) -> float:
    n = int(round(np.log2(ideal.shape[0])))
    coeffs = np.array(
        [np.trace(stokes_operator(idx).conj().T @ ideal) / ideal.shape[0] for idx in product(range(4), repeat=n)]
    )
    return float(np.vdot(coeffs, w @ coeffs).real)
