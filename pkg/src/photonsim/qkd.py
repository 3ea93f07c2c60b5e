"""Desk-scale key distribution: BB84 with loss, depolarization and intercept-resend, plus a Gaussian CV link."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import cv, fock
from . import linear_optics as lo
from . import measurement as ms
from . import qubits as qb

DEFAULT_ABORT_QBER = 0.11
CHUNK = 1 << 16
BASES = ("HV", "DA")


class ProtocolError(RuntimeError):
    pass


@dataclass(frozen=True)
class Bb84Config:
    n_pulses: int
    loss_prob: float = 0.0
    depolarize_prob: float = 0.0
    eve: str = "none"  # none | intercept (fixed HV) | intercept-random
    rng_seed: int = 0
    disclose_fraction: float = 0.5
    abort_qber: float = DEFAULT_ABORT_QBER

    def __post_init__(self):
        for name in ("loss_prob", "depolarize_prob", "disclose_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.eve not in ("none", "intercept", "intercept-random"):
            raise ValueError(f"unknown eavesdropper {self.eve!r}")
        if self.n_pulses <= 0:
            raise ValueError("n_pulses must be positive")


@dataclass
class KeyReport:
    sifted_length: int
    disclosed: int
    errors: int
    qber: float
    decision: str
    key: np.ndarray = field(repr=False)
    transcript: dict[str, np.ndarray] = field(repr=False)
    reconciliation: str = "not implemented"
    privacy_amplification: str = "not implemented"

    def summary(self) -> dict:
        out = asdict(self)
        out.pop("key")
        out.pop("transcript")
        out["key_length"] = int(self.key.size)
        return out

    def transcript_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        cols = ["pulse", "alice_basis", "bob_basis", "bit", "kept"]
        w.writerow(cols)
        t = self.transcript
        for row in zip(*(t[c] for c in cols)):
            w.writerow([int(v) for v in row])
        return buf.getvalue()


def _run_chunk(cfg: Bb84Config, n: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
    bits = rng.integers(0, 2, n)
    alice_basis = rng.integers(0, 2, n)
    state_bit, state_basis = bits.copy(), alice_basis.copy()
    if cfg.eve != "none":
        eve_basis = np.zeros(n, dtype=int) if cfg.eve == "intercept" else rng.integers(0, 2, n)
        guess = rng.integers(0, 2, n)
        # wrong-basis measurement gives a fair coin; Eve resends what she saw
        state_bit = np.where(eve_basis == state_basis, state_bit, guess)
        state_basis = eve_basis
    arrived = rng.random(n) >= cfg.loss_prob
    scrambled = rng.random(n) < cfg.depolarize_prob
    bob_basis = rng.integers(0, 2, n)
    coin = rng.integers(0, 2, n)
    bob_bit = np.where((bob_basis == state_basis) & ~scrambled, state_bit, coin)
    kept = arrived & (bob_basis == alice_basis)
    return {
        "alice_basis": alice_basis,
        "bob_basis": bob_basis,
        "bit": bits,
        "bob_bit": bob_bit,
        "kept": kept,
        "arrived": arrived,
    }


def run_bb84(cfg: Bb84Config) -> KeyReport:
    """Prepare, transmit, measure, sift and estimate the error rate on a disclosed subset.

    Pulses are processed in fixed-size chunks, each with its own spawned RNG
    stream, so results depend only on the seed and not on chunking order.
    """
    sizes = [CHUNK] * (cfg.n_pulses // CHUNK)
    if cfg.n_pulses % CHUNK:
        sizes.append(cfg.n_pulses % CHUNK)
    root = np.random.SeedSequence(cfg.rng_seed)
    streams = [np.random.default_rng(s) for s in root.spawn(len(sizes) + 1)]
    parts = [_run_chunk(cfg, n, g) for n, g in zip(sizes, streams)]
    t = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    t["pulse"] = np.arange(cfg.n_pulses)

    sifted = np.flatnonzero(t["kept"])
    if sifted.size == 0:
        raise ProtocolError("no sifted bits survived")
    disclose = streams[-1].random(sifted.size) < cfg.disclose_fraction
    if cfg.disclose_fraction > 0 and not disclose.any():
        disclose[0] = True
    test = sifted[disclose]
    errors = int(np.count_nonzero(t["bit"][test] != t["bob_bit"][test]))
    qber = errors / test.size if test.size else 0.0
    decision = "proceed" if qber <= cfg.abort_qber else "abort"
    key = t["bob_bit"][sifted[~disclose]] if decision == "proceed" else np.empty(0, dtype=int)
    return KeyReport(int(sifted.size), int(test.size), errors, qber, decision, key, t)


def basis_state(bit: int, basis: str) -> np.ndarray:
    if basis == "HV":
        return qb.ket(str(bit))
    return qb.normalized([1, 1 if bit == 0 else -1])


def _analyzer(basis: str) -> np.ndarray:
    # rotates the chosen basis onto H/V before the photon counters
    return np.eye(2) if basis == "HV" else lo.waveplate_unitary("half", math.pi / 8)


def resend_density_matrix(bit: int, alice_basis: str, eve_basis: str) -> np.ndarray:
    """Bob's single-pulse state after Eve measures in ``eve_basis`` and re-prepares her result.

    The photon is propagated and counted with the Fock engine; Eve's outcomes
    are averaged into a density matrix on the (H, V) qubit.
    """
    photon = qb.dual_rail(basis_state(bit, alice_basis))
    at_detectors = lo.apply(_analyzer(eve_basis), photon)
    rho = np.zeros((2, 2), dtype=complex)
    for occ, prob in ms.outcome_distribution(at_detectors, [0, 1]).items():
        if prob < 1e-15:
            continue
        resent = lo.apply(_analyzer(eve_basis).conj().T, fock.basis_state(occ))
        vec = qb.from_dual_rail(resent)
        rho += prob * np.outer(vec, vec.conj())
    return rho


def temporal_encoding_states() -> dict[str, fock.PureState]:
    """Time-bin qubit states over an early and a late mode."""
    table = {
        "T1+T2": [1, 1],
        "T1-T2": [1, -1],
        "T1+iT2": [1, 1j],
        "T1-iT2": [1, -1j],
    }
    return {name: qb.dual_rail(qb.normalized(v)) for name, v in table.items()}


def basis_overlaps(states: dict[str, fock.PureState]) -> dict[tuple[str, str], float]:
    names = list(states)
    return {
        (a, b): abs(fock.inner_product(states[a], states[b])) ** 2
        for i, a in enumerate(names)
        for b in names[i + 1 :]
    }


def multi_photon_fraction(mean_photons: float, cutoff: int = 30) -> float:
    """Share of non-empty attenuated-laser pulses that carry two or more photons."""
    stats = fock.photon_statistics(fock.coherent_state(math.sqrt(mean_photons), cutoff), [0])
    p0 = stats.get((0,), 0.0)
    p1 = stats.get((1,), 0.0)
    nonempty = 1 - p0
    return (nonempty - p1) / nonempty if nonempty > 0 else 0.0


def run_cv_qkd(
    n_symbols: int,
    modulation_variance: float,
    channel_loss: float = 0.0,
    rng_seed: int = 0,
    eavesdropper: bool = False,
) -> dict[str, float]:
    """Gaussian-modulated coherent states with random-quadrature homodyne at Bob.

    Sifting keeps the quadrature Bob measured.  The excess noise is referred to
    the channel input in vacuum units.
    """
    rng = np.random.default_rng(rng_seed)
    data = cv.run_cv_link(n_symbols, modulation_variance, 1 - channel_loss, rng, eavesdropper)
    sent, measured = data["sent"], data["measured"]
    var_sent = float(np.var(sent))
    if var_sent > 0:
        gain = float(np.cov(sent, measured)[0, 1] / var_sent)
    else:
        gain = math.sqrt(1 - channel_loss)
    noise = float(np.var(measured - gain * sent))
    snr = gain**2 * var_sent / noise
    excess = (noise - 1) / gain**2 if gain else math.inf
    return {"snr_B": snr, "excess_noise_estimate": excess, "transmission_estimate": gain**2}
