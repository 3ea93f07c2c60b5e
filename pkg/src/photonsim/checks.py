"""Built-in expectation table run by ``photonsim selftest`` and the demos."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import capacity, cluster, cv, fock, gates, grover, parity, qkd, tomography
from . import linear_optics as lo
from . import measurement as ms
from . import qubits as qb


@dataclass
class Metric:
    name: str
    value: float
    expected: float | None = None
    tolerance: float | None = None
    comparison: str = "abs"  # abs | le | ge

    def passed(self, scale: float = 1.0) -> bool | None:
        if self.expected is None:
            return None
        tol = (self.tolerance or 0.0) * scale
        if self.comparison == "le":
            return self.value <= self.expected + tol
        if self.comparison == "ge":
            return self.value >= self.expected - tol
        return abs(self.value - self.expected) <= tol

    def to_dict(self, scale: float = 1.0) -> dict:
        out = {"value": self.value}
        if self.expected is not None:
            out.update(expected=self.expected, tolerance=(self.tolerance or 0.0) * scale,
                       comparison=self.comparison, passed=self.passed(scale))
        return out


def _worst(name: str, values, expected: float, tol: float) -> Metric:
    values = list(values)
    return Metric(name, max(values, key=lambda v: abs(v - expected)), expected, tol)


SAMPLE_INPUTS = [np.eye(4)[j] for j in range(4)] + [
    qb.normalized([1, 1, 0, 0]),
    qb.normalized([1, 0, 1j, 1]),
]


def hong_ou_mandel() -> list[Metric]:
    out = lo.apply(lo.balanced_beamsplitter(), fock.basis_state((1, 1)))
    return [Metric("coincidence_probability", abs(out.amplitude((1, 1))) ** 2, 0.0, 1e-12)]


def klm_cnot() -> list[Metric]:
    probs = [gates.success_probability(gates.klm_heralded_cnot(s)) for s in SAMPLE_INPUTS]
    k = gates.klm_kraus()
    return [
        _worst("success_probability", probs, gates.KLM_SUCCESS, 1e-9),
        Metric("process_fidelity", qb.process_fidelity(k, qb.CNOT), 1.0, 1e-9),
        Metric("success_bound", gates.KLM_SUCCESS, 1 / 16, 0.0, "le"),
    ]


def coincidence_cnot() -> list[Metric]:
    probs = [gates.success_probability(gates.coincidence_cnot(np.eye(4)[j])) for j in range(4)]
    amp = gates.coincidence_interference()
    return [
        _worst("success_probability", probs, 1 / 9, 1e-10),
        Metric("process_fidelity", qb.process_fidelity(gates.coincidence_kraus(), qb.CNOT), 1.0, 1e-9),
        Metric("interference_amplitude", amp["total"], -1 / 3, 1e-12),
    ]


def teleport_cs() -> list[Metric]:
    probs, fids = [], []
    for s in SAMPLE_INPUTS:
        results = gates.teleport_cs_gate(s)
        probs.append(gates.success_probability(results))
        fids += [qb.state_fidelity(r.state, qb.CS @ s) for r in results if r.success]
    return [
        _worst("success_probability", probs, 0.25, 1e-10),
        _worst("branch_fidelity", fids, 1.0, 1e-10),
    ]


def t3_teleporter(rng: np.random.Generator) -> list[Metric]:
    probs, fids, raw_errors = [], [], []
    for _ in range(5):
        v = qb.random_qubit(rng)
        branches = gates.t3_teleporter(v)
        probs.append(sum(b.probability for b in branches if b.state is not None))
        fids += [qb.state_fidelity(b.state, v) for b in branches if b.state is not None]
        state = ms.condition(gates._t3_output(v), [0, 1, 2], [1, 0, 0]).state
        want = fock.PureState.from_terms(2, {(1, 0): v[0], (1, 1): v[1]})
        raw_errors.append(1 - fock.fidelity(state, want))
    composite = []
    for s in SAMPLE_INPUTS:
        results = gates.teleported_cs_gate(s)
        composite.append(gates.success_probability(results))
        fids += [qb.state_fidelity(r.state, qb.CS @ s) for r in results if r.success]
    return [
        _worst("success_probability", probs, 2 / 3, 1e-10),
        _worst("outcome_100_infidelity", raw_errors, 0.0, 1e-10),
        _worst("branch_fidelity", fids, 1.0, 1e-10),
        _worst("composite_success", composite, 4 / 9, 1e-9),
    ]


def parity_fusion(rng: np.random.Generator, trials: int = 100_000) -> list[Metric]:
    v = qb.random_qubit(rng)
    code = parity.parity_encode(v, 2)
    zfids = [qb.state_fidelity(r.code.logical(), v) for q in (0, 1) for r in parity.parity_z_measure(code, q)]
    fusion = parity.fusion_type_II(parity.parity_encode(v, 3), 2)
    success = sum(r.probability for r in fusion if r.success)
    grown = {r.code.n for r in fusion if r.success}
    shrunk = {r.code.n for r in fusion if not r.success}
    mc = parity.encoded_cs_monte_carlo(trials, rng)
    return [
        _worst("z_measure_fidelity", zfids, 1.0, 1e-10),
        Metric("fusion_success", success, 0.5, 1e-10),
        Metric("fusion_success_length", max(grown), 3 + 2, 0.0),
        Metric("fusion_failure_length", max(shrunk), 3 - 1, 0.0),
        Metric("encoded_cs_success", mc["encoded"], 0.58, 0.01),
        Metric("unencoded_cs_success", mc["unencoded"], 4 / 9, 5 * math.sqrt(2 / 9 * 5 / 9 / trials) + 1e-12),
    ]


def cluster_rotation(rng: np.random.Generator) -> list[Metric]:
    fids = []
    for _ in range(20):
        v = qb.random_qubit(rng)
        theta = rng.uniform(0, 2 * math.pi)
        target = qb.x_rotation(theta) @ v
        fids += [qb.state_fidelity(b.state, target) for b in cluster.cluster_x_rotation(v, theta)]
    return [_worst("branch_fidelity", fids, 1.0, 1e-10)]


def grover_search(n: int = 4) -> list[Metric]:
    metrics = [Metric("success_probability_n4", grover.grover_linear_optics(4, 2)["success"], 1.0, 1e-12)]
    if n != 4:
        run = grover.grover_linear_optics(n, n - 1)
        metrics.append(Metric(f"success_probability_n{n}", run["success"],
                              grover.grover_closed_form(n, run["iterations"]), 1e-10))
    for size in (16,):
        for k in (1, 2, 3):
            got = grover.grover_linear_optics(size, 5, k)["success"]
            metrics.append(Metric(f"n{size}_k{k}", got, grover.grover_closed_form(size, k), 1e-10))
    for size in (4, 16, 64):
        metrics.append(Metric(f"homodyne_snr_n{size}", grover.grover_homodyne_snr(size), 1 / size, 1e-12))
    return metrics


def cv_teleportation(rng: np.random.Generator, shots: int = 100_000) -> list[Metric]:
    out = cv.teleport_cv(cv.coherent(10.0), 1.0, None)
    vp, vm = out.variances()
    g = 5.0
    noise = cv.teleport_cv(cv.vacuum(1), 1.0, g).variances()[0] - 1
    samples = cv.sample_teleport_cv(cv.coherent(1.0), 1.0, g, shots, rng)
    analytic = cv.teleport_cv(cv.coherent(1.0), 1.0, g).cov
    emp = np.cov(samples.T)
    # standard error of a sample variance is sqrt(2/shots) times the variance
    z = np.max(np.abs(emp - analytic) / (np.sqrt(2 / shots) * np.sqrt(np.outer(np.diag(analytic), np.diag(analytic)))))
    return [
        Metric("classical_V_plus", vp, 3.0, 1e-12),
        Metric("classical_V_minus", vm, 3.0, 1e-12),
        Metric("classical_fidelity", cv.fidelity_gaussian(vp, vm, 10.0, 1.0), 0.5, 1e-6),
        Metric("added_noise_G5", noise, 2 * (math.sqrt(g) - math.sqrt(g - 1)) ** 2, 1e-12),
        Metric("sampler_covariance_sigma", float(z), 5.0, 0.0, "le"),
    ]


def tv_diagram() -> list[Metric]:
    classical = cv.teleporter_tv(1.0, None)
    cross = cv.tv_crossover()
    return [
        Metric("classical_T_q", classical["T_q"], 2 / 3, 1e-10),
        Metric("crossover_T_q", cross["T_q"], 1.0, 1e-6),
        Metric("crossover_V_q", cross["V_q"], 1.0, 1e-6),
        Metric("crossover_fidelity", cross["F"], 2 / 3, 1e-6),
    ]


def capacities(rng: np.random.Generator) -> list[Metric]:
    c = capacity.capacities(2.0)
    grid = np.concatenate([np.linspace(1e-3, 1, 200), np.geomspace(1, 1000, 200)])
    worst_gap = min(
        min(v["number_states"] - v["squeezed_homodyne"],
            v["squeezed_homodyne"] - max(v["coherent_homodyne"], v["coherent_heterodyne"]))
        for v in map(capacity.capacities, grid)
    )
    identity = []
    for nbar in rng.uniform(0.01, 100, 10):
        snr = capacity.optimal_squeezing(nbar)["snr"]
        identity.append(abs(0.5 * math.log2(1 + snr) - math.log2(1 + 2 * nbar)))
    return [
        Metric("coherent_homodyne_n2", c["coherent_homodyne"], math.log2(3), 1e-12),
        Metric("coherent_heterodyne_n2", c["coherent_heterodyne"], math.log2(3), 1e-12),
        Metric("ordering_margin", worst_gap, 0.0, 1e-12, "ge"),
        Metric("squeezing_identity_error", max(identity), 0.0, 1e-12),
    ]


def _random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def tomography_checks(rng: np.random.Generator, shots: int = 1_000_000) -> list[Metric]:
    errors = []
    for k in range(50):
        n = 1 + k % 2
        rho = _random_density(rng, 2**n)
        exact = {idx: float(np.trace(rho @ tomography.stokes_operator(idx)).real)
                 for idx in np.ndindex(*(4,) * n)}
        errors.append(np.abs(tomography.linear_inversion(exact, n) - rho).max())
    w = tomography.process_tomography(tomography.unitary_channel(qb.CNOT), 2)
    mags = np.abs(w).ravel()
    off_grid = float(np.max(np.minimum(mags, np.abs(mags - 0.25))))
    phi = qb.normalized([1, 0, 0, 1])
    counts = tomography.simulate_counts(np.outer(phi, phi.conj()), shots // 9, rng)
    fid = tomography.fidelity(tomography.reconstruct(counts), phi)
    return [
        _worst("round_trip_error", errors, 0.0, 1e-10),
        Metric("cnot_entry_grid_error", off_grid, 0.0, 1e-10),
        Metric("sampled_phi_plus_fidelity", fid, 0.99, 0.0, "ge"),
    ]


def bb84(pulses: int = 100_000, seed: int = 0) -> list[Metric]:
    quiet = qkd.run_bb84(qkd.Bb84Config(pulses, rng_seed=seed))
    eve = qkd.run_bb84(qkd.Bb84Config(pulses, eve="intercept", rng_seed=seed))
    sigma = math.sqrt(0.25 * 0.75 / eve.disclosed)
    rho_err = max(
        np.abs(qkd.resend_density_matrix(bit, "DA", "HV") - np.eye(2) / 2).max() for bit in (0, 1)
    )
    return [
        Metric("qber_no_eve", quiet.qber, 0.0, 0.0),
        Metric("qber_intercept", eve.qber, 0.25, 5 * sigma),
        Metric("wrong_basis_resend_error", float(rho_err), 0.0, 1e-12),
    ]


def sources() -> list[Metric]:
    pairs = fock.photon_statistics(fock.two_mode_down_conversion(0.1), [0, 1])
    lasers = fock.photon_statistics(fock.two_attenuated_lasers(0.1, cutoff=12), [0, 1])
    mixture = fock.DiagonalFockMixture({0: 0.45, 1: 0.55})
    return [
        Metric("down_conversion_P20", pairs.get((2, 0), 0.0), 0.0, 0.0),
        Metric("lasers_P20_over_P11", lasers[(2, 0)] / lasers[(1, 1)], 0.5, 1e-12),
        Metric("wigner_origin", fock.wigner_at_origin(mixture), -0.1 / math.pi, 1e-12),
    ]


def acceptance_table(seed: int = 0) -> list[tuple[str, Callable[[], list[Metric]]]]:
    rng = lambda k: np.random.default_rng([seed, k])
    return [
        ("hong-ou-mandel", hong_ou_mandel),
        ("klm-cnot", klm_cnot),
        ("coincidence-cnot", coincidence_cnot),
        ("teleport-cs", teleport_cs),
        ("t3-teleporter", lambda: t3_teleporter(rng(5))),
        ("parity-fusion", lambda: parity_fusion(rng(6))),
        ("cluster-rotation", lambda: cluster_rotation(rng(7))),
        ("grover", grover_search),
        ("cv-teleportation", lambda: cv_teleportation(rng(9))),
        ("tv-diagram", tv_diagram),
        ("capacities", lambda: capacities(rng(11))),
        ("tomography", lambda: tomography_checks(rng(12))),
        ("bb84", lambda: bb84(seed=seed)),
        ("sources", sources),
    ]
