"""Channel capacities of a single optical mode at fixed mean photon number."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq


def _check(nbar: float) -> None:
    if nbar < 0 or not math.isfinite(nbar):
        raise ValueError("mean photon number must be finite and non-negative")


def coherent_homodyne(nbar: float) -> float:
    """Coherent states, one quadrature read out: log2 sqrt(1 + 4 nbar)."""
    _check(nbar)
    return math.log2(math.sqrt(1 + 4 * nbar))


def coherent_heterodyne(nbar: float) -> float:
    """Coherent states, both quadratures read out: log2(1 + nbar)."""
    _check(nbar)
    return math.log2(1 + nbar)


def squeezed_homodyne(nbar: float) -> float:
    """Optimally squeezed states with homodyne detection: log2(1 + 2 nbar)."""
    _check(nbar)
    return math.log2(1 + 2 * nbar)


def number_states(nbar: float) -> float:
    """Photon-number states with counting: the thermal entropy at nbar."""
    _check(nbar)
    if nbar == 0:
        return 0.0
    return (1 + nbar) * math.log2(1 + nbar) - nbar * math.log2(nbar)


CAPACITIES = {
    "coherent_homodyne": coherent_homodyne,
    "coherent_heterodyne": coherent_heterodyne,
    "squeezed_homodyne": squeezed_homodyne,
    "number_states": number_states,
}


def capacities(nbar: float) -> dict[str, float]:
    return {name: fn(nbar) for name, fn in CAPACITIES.items()}


def optimal_squeezing(nbar: float) -> dict[str, float]:
    """Squeezed variance splitting the photon budget between signal and squeezing.

    Returns the squeezed variance V, the signal variance V_s and the resulting
    signal-to-noise ratio V_s / V.
    """
    _check(nbar)
    v = 1 / (1 + 2 * nbar)
    # photons in the squeezing: (V + 1/V - 2) / 4; the rest carries the signal
    squeeze_photons = (v + 1 / v - 2) / 4
    v_s = 4 * (nbar - squeeze_photons)
    return {"V": v, "V_s": v_s, "snr": v_s / v}


def nbar_from_variances(v_plus: float, v_minus: float) -> float:
    """Mean photon number of a zero-mean Gaussian state with the given quadrature variances."""
    if v_plus * v_minus < 1 - 1e-12:
        raise ValueError("variances violate the uncertainty principle")
    return (v_plus + v_minus) / 4 - 0.5


def crossover() -> float:
    """Nonzero mean photon number where coherent homodyne and heterodyne coding coincide."""
    return brentq(lambda n: coherent_homodyne(n) - coherent_heterodyne(n), 0.5, 100.0, xtol=1e-15)


def grid(start: float, stop: float, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("grid needs at least one point")
    return np.linspace(start, stop, count)
