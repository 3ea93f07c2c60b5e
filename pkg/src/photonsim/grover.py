"""Unary (one photon, N modes) Grover search and its classical-light counterpart."""

from __future__ import annotations

import math

import numpy as np

from . import linear_optics as lo
from . import measurement as ms
from .fock import single_photon


def _check_size(n: int) -> int:
    bits = int(round(math.log2(n))) if n > 0 else -1
    if n < 2 or 2**bits != n:
        raise ValueError("database size must be a power of two >= 2")
    return bits


def fanout_network(n: int) -> list[lo.ElementSpec]:
    """Balanced beamsplitter tree mapping mode 0 onto the uniform superposition."""
    bits = _check_size(n)
    elements = []
    for b in range(bits):
        step = 2**b
        for i in range(n):
            if not i & step:
                elements.append(lo.ElementSpec("beamsplitter", [i, i + step], {"eta": 0.5}))
    return elements


def oracle_network(n: int, marked: int) -> list[lo.ElementSpec]:
    if not 0 <= marked < n:
        raise ValueError("marked item out of range")
    return [lo.ElementSpec("phase", [marked], {"phase": math.pi})]


def diffusion_network(n: int) -> list[lo.ElementSpec]:
    """Inversion about the mean, 2|s><s| - I, as fan-in, phase flips, fan-out."""
    tree = fanout_network(n)
    flips = [lo.ElementSpec("phase", [i], {"phase": math.pi}) for i in range(1, n)]
    return tree + flips + tree


def grover_iterations(n: int) -> int:
    _check_size(n)
    if n == 4:
        return 1
    return max(1, round(math.pi / 4 * math.sqrt(n) - 0.5))


def grover_closed_form(n: int, iterations: int) -> float:
    return math.sin((2 * iterations + 1) * math.asin(1 / math.sqrt(n))) ** 2


def grover_linear_optics(n: int, marked: int, iterations: int | None = None) -> dict:
    """Run the search on a single photon; returns the output distribution and success."""
    if iterations is None:
        iterations = grover_iterations(n)
    circuit = fanout_network(n)
    for _ in range(iterations):
        circuit += oracle_network(n, marked) + diffusion_network(n)
    psi = lo.run_circuit(circuit, single_photon(n, 0))
    dist = ms.outcome_distribution(psi, range(n))
    probs = np.zeros(n)
    for occ, p in dist.items():
        probs[occ.index(1)] += p
    return {"iterations": iterations, "probabilities": probs, "success": float(probs[marked])}


def grover_homodyne(n: int, marked: int = 0, mean_photons: float = 1.0) -> dict:
    """Coherent light through the same fan-out and oracle, read out by homodyne.

    The input amplitude is spread over ``n`` modes; the oracle sign flip shows
    up as the quadrature displacement of the marked mode.  ``snr`` is the squared
    half-displacement over the vacuum variance (photon units), and ``repetitions``
    the number of queries needed to bring it to one.
    """
    u = lo.circuit_unitary(fanout_network(n) + oracle_network(n, marked), n)
    alpha = np.zeros(n, dtype=complex)
    alpha[0] = math.sqrt(mean_photons)
    out = u @ alpha
    displacement = 2 * out.real
    vacuum_variance = 1.0
    snr = float((displacement[marked] / 2) ** 2 / vacuum_variance)
    return {"snr": snr, "repetitions": math.ceil(1 / snr - 1e-12), "displacement": displacement}


def grover_homodyne_snr(n: int) -> float:
    return grover_homodyne(n)["snr"]
