"""Gaussian continuous-variable optics in the quadrature picture.

Quadratures are X+ = a + a^dag and X- = i(a^dag - a), so the vacuum has unit
variance in each.  Vectors are ordered (X+_1, X-_1, X+_2, X-_2, ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    @property
    def modes(self) -> int:
        return self.mean.size // 2

    def variances(self, mode: int = 0) -> tuple[float, float]:
        return float(self.cov[2 * mode, 2 * mode]), float(self.cov[2 * mode + 1, 2 * mode + 1])


def vacuum(modes: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * modes), np.eye(2 * modes))


def coherent(alpha: complex) -> GaussianState:
    alpha = complex(alpha)
    return GaussianState(np.array([2 * alpha.real, 2 * alpha.imag]), np.eye(2))


def squeezed(r: float) -> GaussianState:
    """X+ amplified by e^{2r}, X- squeezed by e^{-2r}."""
    return GaussianState(np.zeros(2), np.diag([math.exp(2 * r), math.exp(-2 * r)]))


def product(*states: GaussianState) -> GaussianState:
    mean = np.concatenate([s.mean for s in states])
    cov = np.zeros((mean.size, mean.size))
    k = 0
    for s in states:
        d = s.mean.size
        cov[k : k + d, k : k + d] = s.cov
        k += d
    return GaussianState(mean, cov)


def transform(state: GaussianState, s: np.ndarray, noise: np.ndarray | None = None) -> GaussianState:
    cov = s @ state.cov @ s.T
    if noise is not None:
        cov = cov + noise
    return GaussianState(s @ state.mean, cov)


def beamsplitter_symplectic(transmission: float = 0.5) -> np.ndarray:
    """Modes (a, b) -> (sqrt(t) a + sqrt(1-t) b, sqrt(1-t) a - sqrt(t) b) on both quadratures."""
    t, r = math.sqrt(transmission), math.sqrt(1 - transmission)
    i2 = np.eye(2)
    return np.block([[t * i2, r * i2], [r * i2, -t * i2]])


def amplifier_symplectic(gain: float) -> np.ndarray:
    """Non-degenerate amplifier a -> sqrt(G) a + sqrt(G-1) b^dag and its partner."""
    if gain < 1:
        raise ValueError("amplifier gain must be at least 1")
    g, h = math.sqrt(gain), math.sqrt(gain - 1)
    flip = np.diag([1.0, -1.0])
    return np.block([[g * np.eye(2), h * flip], [h * flip, g * np.eye(2)]])


def epr_source(gain: float) -> GaussianState:
    """Two-mode squeezed vacuum from an amplifier of intensity gain ``gain``."""
    return transform(vacuum(2), amplifier_symplectic(gain))


def epr_from_squeezers(gain: float) -> GaussianState:
    """The same entangled pair built from two opposite squeezers and a 50:50 beamsplitter."""
    r = math.asinh(math.sqrt(gain - 1))  # cosh r = sqrt(G), stable near G = 1
    pair = product(squeezed(r), squeezed(-r))
    return transform(pair, beamsplitter_symplectic(0.5))


def epr_correlations(gain: float) -> dict[str, float]:
    st = epr_source(gain)
    return {
        "variance": float(st.cov[0, 0]),
        "plus": float(st.cov[0, 2]),
        "minus": float(st.cov[1, 3]),
    }


def _teleport_map(gain: float) -> np.ndarray:
    # rows: X+_out, X-_out; columns: input (X+, X-), sender half, receiver half
    return np.array(
        [
            [gain, 0, -gain, 0, 1, 0],
            [0, gain, 0, gain, 0, 1],
        ],
        dtype=float,
    )


def teleport_joint(state_in: GaussianState, entanglement_gain: float | None) -> GaussianState:
    """Input mode followed by the two shared modes (vacua when no entanglement is used)."""
    shared = vacuum(2) if entanglement_gain is None else epr_source(entanglement_gain)
    return product(state_in, shared)


def teleport_cv(
    state_in: GaussianState, gain: float = 1.0, entanglement_gain: float | None = None
) -> GaussianState:
    """Output of the dual-homodyne teleporter with feed-forward ``gain``.

    X+_out = X+_recv + g (X+_in - X+_send),  X-_out = X-_recv + g (X-_in + X-_send).
    """
    return transform(teleport_joint(state_in, entanglement_gain), _teleport_map(gain))


def teleport_input_output(
    state_in: GaussianState, gain: float = 1.0, entanglement_gain: float | None = None
) -> GaussianState:
    """Joint Gaussian state of (input, output), used for correlations."""
    joint = teleport_joint(state_in, entanglement_gain)
    keep = np.zeros((4, 6))
    keep[0, 0] = keep[1, 1] = 1
    keep[2:] = _teleport_map(gain)
    return transform(joint, keep)


def sample_teleport_cv(
    state_in: GaussianState,
    gain: float,
    entanglement_gain: float | None,
    shots: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Shot-by-shot simulation: sample Wigner vectors, mix, measure, feed forward.

    Returns an array of shape (shots, 2) with the output quadratures.
    """
    joint = teleport_joint(state_in, entanglement_gain)
    w = rng.multivariate_normal(joint.mean, joint.cov, size=shots)
    a_p, a_m, s_p, s_m, r_p, r_m = w.T
    # sender's 50:50 beamsplitter between input and her half of the pair
    minus_port_p = (a_p - s_p) / math.sqrt(2)
    plus_port_m = (a_m + s_m) / math.sqrt(2)
    # homodyne X+ on one port and X- on the other, then displace the receiver's mode
    out_p = r_p + gain * math.sqrt(2) * minus_port_p
    out_m = r_m + gain * math.sqrt(2) * plus_port_m
    return np.column_stack([out_p, out_m])


def added_noise(entanglement_gain: float) -> float:
    """Noise added to each quadrature at unity gain, 2 (sqrt(G) - sqrt(G-1))^2."""
    e = math.sqrt(entanglement_gain) - math.sqrt(entanglement_gain - 1)
    return 2 * e**2


def fidelity_gaussian(v_plus: float, v_minus: float, alpha: complex, gain: float) -> float:
    """Overlap of a Gaussian output of variances (V+, V-) and mean g*alpha with |alpha>."""
    root = math.sqrt((v_plus + 1) * (v_minus + 1))
    return 2 / root * math.exp(-2 / root * abs(alpha) ** 2 * (1 - gain) ** 2)


def transfer_coefficient(signal_in: float, noise_in: float, signal_out: float, noise_out: float) -> float:
    """T = SNR_out / SNR_in for one quadrature."""
    if signal_in <= 0 or noise_in <= 0:
        raise ValueError("input signal-to-noise ratio is undefined without a signal")
    return (signal_out / noise_out) / (signal_in / noise_in)


def tv_criteria(
    t_plus: float, t_minus: float, v_in: tuple[float, float], v_out: tuple[float, float]
) -> tuple[float, float]:
    """(T_q, V_q) from signal transfers and the quantum-noise variances of input and output."""
    tq = t_plus + t_minus - t_plus * t_minus * (1 - 1 / (v_in[0] * v_in[1]))
    vq = (1 - t_plus) * (1 - t_minus) * v_out[0] * v_out[1]
    return tq, vq


def conditional_variances(state_in: GaussianState, gain: float, entanglement_gain: float | None):
    """V_in|out for each quadrature from the joint input/output covariance."""
    j = teleport_input_output(state_in, gain, entanglement_gain).cov
    out = []
    for q in (0, 1):
        v_in, v_out, c = j[q, q], j[2 + q, 2 + q], j[q, 2 + q]
        out.append(v_out - abs(c) ** 2 / v_in)
    return tuple(out)


def teleporter_tv(gain: float, entanglement_gain: float | None, signal_variance: float = 100.0) -> dict:
    """T-V characterization of the teleporter for a coherent-state input.

    The signal is a Gaussian spread of coherent amplitudes with quadrature
    variance ``signal_variance`` on top of the vacuum noise.
    """
    if signal_variance <= 0:
        raise ValueError("a positive signal variance is needed to measure signal transfer")
    quiet = teleport_cv(vacuum(1), gain, entanglement_gain)
    loud = teleport_cv(
        GaussianState(np.zeros(2), np.eye(2) * (1 + signal_variance)), gain, entanglement_gain
    )
    noise_out = quiet.variances()
    total_out = loud.variances()
    t = [
        transfer_coefficient(signal_variance, 1.0, total_out[q] - noise_out[q], noise_out[q])
        for q in (0, 1)
    ]
    tq, vq = tv_criteria(t[0], t[1], (1.0, 1.0), noise_out)
    return {"T_plus": t[0], "T_minus": t[1], "T_q": tq, "V_q": vq, "V_out": noise_out}


def arthurs_goodman_check(v_plus: float, v_minus: float, tol: float = 1e-12) -> bool:
    """Measurement penalties of a joint conjugate measurement must satisfy V+ V- >= 1."""
    return v_plus * v_minus >= 1 - tol


def unity_gain_figures(entanglement_gain: float) -> dict[str, float]:
    """Closed forms at unity gain in terms of e = sqrt(G) - sqrt(G-1)."""
    e2 = (math.sqrt(entanglement_gain) - math.sqrt(entanglement_gain - 1)) ** 2
    return {
        "T": 1 / (1 + 2 * e2),
        "T_q": 2 / (1 + 2 * e2),
        "V_q": 4 * e2**2,
        "F": 1 / (1 + e2),
    }


def tv_crossover() -> dict[str, float]:
    """Entanglement gain at which unity-gain teleportation sits at (T_q, V_q) = (1, 1)."""
    g = brentq(lambda x: teleporter_tv(1.0, x)["V_q"] - 1, 1.0 + 1e-12, 1e6, xtol=1e-14)
    tv = teleporter_tv(1.0, g)
    v = tv["V_out"]
    return {"G": g, "T_q": tv["T_q"], "V_q": tv["V_q"], "F": fidelity_gaussian(v[0], v[1], 10.0, 1.0)}


def gain_sweep(gains, entanglement_gain: float | None, alpha: float = 10.0) -> list[dict]:
    rows = []
    for g in gains:
        out = teleport_cv(coherent(alpha), g, entanglement_gain)
        vp, vm = out.variances()
        tv = teleporter_tv(g, entanglement_gain)
        rows.append(
            {
                "g": g,
                "G": entanglement_gain if entanglement_gain is not None else 1.0,
                "V_plus": vp,
                "V_minus": vm,
                "F": fidelity_gaussian(vp, vm, alpha, g),
                "T_q": tv["T_q"],
                "V_q": tv["V_q"],
            }
        )
    return rows


def run_cv_link(
    pulses: int,
    signal_variance: float,
    transmission: float,
    rng: np.random.Generator,
    eavesdropper: bool = False,
) -> dict[str, np.ndarray]:
    """Gaussian-modulated coherent states sent over a lossy line to a random-quadrature homodyne.

    An intercept-resend attacker measures both quadratures (heterodyne) and
    re-prepares a coherent state at unity gain.
    """
    if not 0 < transmission <= 1:
        raise ValueError("transmission must lie in (0, 1]")
    x = rng.normal(0, math.sqrt(signal_variance), size=(pulses, 2))
    field = x + rng.normal(size=(pulses, 2))  # vacuum noise of the coherent state
    if eavesdropper:
        # heterodyne: split on a 50:50 beamsplitter, each port adds a vacuum unit
        estimate = field + rng.normal(size=(pulses, 2))
        field = estimate + rng.normal(size=(pulses, 2))
    received = math.sqrt(transmission) * field + math.sqrt(1 - transmission) * rng.normal(size=(pulses, 2))
    basis = rng.integers(0, 2, size=pulses)
    measured = received[np.arange(pulses), basis]
    sent = x[np.arange(pulses), basis]
    return {"sent": sent, "measured": measured, "basis": basis}
