"""Two-qubit photonic gates: cross-Kerr, heralded and post-selected linear optics,
and gates driven by teleportation through entangled resources."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linear_optics as lo
from . import measurement as ms
from . import qubits as qb
from .fock import PureState, basis_state, fidelity, permute_modes, tensor

SUCCESS = "success"
FAILURE = "failure"

# reflectivities of the two beamsplitters in each nonlinear-sign stage
NS_VACUUM_ETA = 5 - 3 * math.sqrt(2)
NS_ANCILLA_ETA = (3 - math.sqrt(2)) / 7
KLM_SUCCESS = NS_ANCILLA_ETA**2
COINCIDENCE_ETA = 1 / 3


class SelfCheckError(RuntimeError):
    pass


@dataclass(frozen=True)
class GateResult:
    """One branch of a probabilistic gate.

    ``state`` is the normalized output register (frame already applied) for a
    success branch.  ``frame`` names the Pauli correction that was applied,
    ``measured`` maps qubit index to the value a failure revealed.
    """

    branch: str
    probability: float
    state: np.ndarray | None = None
    outcome: object = None
    frame: tuple = ()
    measured: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.branch == SUCCESS


def success_probability(results: list[GateResult]) -> float:
    return sum(r.probability for r in results if r.success)


def choose(results: list[GateResult], rng: np.random.Generator) -> GateResult:
    p = np.array([r.probability for r in results])
    return results[rng.choice(len(results), p=p / p.sum())]


def _register(state) -> np.ndarray:
    v = np.asarray(state, dtype=complex).ravel()
    if v.size != 4:
        raise ValueError("expected a two-qubit amplitude vector of length 4")
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero input state")
    return v / n


def product_input(control, target) -> np.ndarray:
    return np.kron(qb.normalized(control), qb.normalized(target))


# --- cross-Kerr -------------------------------------------------------------


def cross_kerr(psi: PureState, mode_a: int, mode_b: int, chi: float) -> PureState:
    """Conditional phase exp(i chi n_a n_b) between two modes."""
    terms = {
        occ: amp * cmath.exp(1j * chi * occ[mode_a] * occ[mode_b]) for occ, amp in psi.terms.items()
    }
    return PureState.from_terms(psi.mode_count, terms, psi.cutoff)


def cross_kerr_cs(state, chi: float = math.pi) -> np.ndarray:
    """Two dual-rail qubits through a cross-Kerr medium coupling their logical-one rails."""
    psi = cross_kerr(qb.dual_rail(_register(state)), 1, 3, chi)
    return qb.from_dual_rail(psi)


def cross_kerr_cnot(state, chi: float = math.pi) -> np.ndarray:
    """CNOT from the Kerr phase gate sandwiched by target half-wave plates at 22.5 degrees."""
    hwp = lo.waveplate_unitary("half", math.pi / 8)
    psi = qb.dual_rail(_register(state))
    psi = lo.apply(hwp, psi, [2, 3])
    psi = cross_kerr(psi, 1, 3, chi)
    psi = lo.apply(hwp, psi, [2, 3])
    return qb.from_dual_rail(psi)


# --- heralded CNOT from two nonlinear-sign stages ----------------------------

# modes: control H/V, target H/V, then (ancilla photon, vacuum) for each stage
_KLM_HERALD_MODES = [4, 5, 6, 7]
_KLM_HERALD = [1, 0, 1, 0]


def _nonlinear_sign(psi: PureState, signal: int, photon: int, empty: int) -> PureState:
    # vacuum tap first, then interference with the ancilla photon; heralded on
    # (photon, empty) = (1, 0) this maps |0>,|1>,|2> to c|0>, c|1>, -c|2> with c^2 = eta2
    psi = lo.apply(lo.beamsplitter_unitary(NS_VACUUM_ETA), psi, [signal, empty])
    return lo.apply(lo.beamsplitter_unitary(NS_ANCILLA_ETA), psi, [photon, signal])


def klm_circuit(state) -> PureState:
    """Full eight-mode output of the heralded CNOT before detection."""
    hwp = lo.waveplate_unitary("half", math.pi / 8)
    bs = lo.balanced_beamsplitter()
    psi = tensor(qb.dual_rail(_register(state)), basis_state((1, 0, 1, 0)))
    psi = lo.apply(hwp, psi, [2, 3])
    psi = lo.apply(bs, psi, [1, 3])
    psi = _nonlinear_sign(psi, 1, 4, 5)
    psi = _nonlinear_sign(psi, 3, 6, 7)
    psi = lo.apply(bs, psi, [1, 3])
    return lo.apply(hwp, psi, [2, 3])


def _klm_kraus() -> np.ndarray:
    cols = []
    for j in range(4):
        out = ms.project(klm_circuit(np.eye(4)[j]), _KLM_HERALD_MODES, _KLM_HERALD)
        cols.append(qb.from_dual_rail(out))
    return np.array(cols).T


@lru_cache(maxsize=1)
def klm_self_check() -> np.ndarray:
    """Verify the heralded map is sqrt(eta2^2) * CNOT; raise SelfCheckError otherwise."""
    if KLM_SUCCESS > 1 / 16:
        raise SelfCheckError(f"heralded success {KLM_SUCCESS} exceeds the 1/16 bound")
    kraus = _klm_kraus()
    expected = NS_ANCILLA_ETA * qb.CNOT
    err = np.abs(kraus - expected).max()
    if err > 1e-9:
        raise SelfCheckError(f"heralded map deviates from CNOT by {err:.3e}")
    return kraus


def klm_heralded_cnot(state) -> list[GateResult]:
    """Heralded CNOT: success when both ancilla photons are found and both vacuum ports stay dark."""
    klm_self_check()
    v = _register(state)
    out = klm_circuit(v)
    cond = ms.condition(out, _KLM_HERALD_MODES, _KLM_HERALD)
    if cond.empty:
        return [GateResult(FAILURE, 1.0, outcome="no herald")]
    logical = qb.from_dual_rail(cond.state)
    p = cond.probability
    return [
        GateResult(SUCCESS, p, qb.normalized(logical), outcome=tuple(_KLM_HERALD)),
        GateResult(FAILURE, 1 - p, outcome="no herald"),
    ]


def klm_kraus() -> np.ndarray:
    return klm_self_check().copy()


# --- coincidence-basis CNOT ---------------------------------------------------

# modes: control H/V, target H/V, vacuum for the control tap, vacuum for the target tap
_COINCIDENCE_GROUPS = [([0, 1], ms.exactly(1)), ([2, 3], ms.exactly(1))]


def _third_splitter() -> np.ndarray:
    # both reflection amplitudes +sqrt(1/3), cross terms carry the sign
    return lo.beamsplitter_unitary(COINCIDENCE_ETA, 0.0, math.pi)


def coincidence_circuit(state) -> PureState:
    hwp = lo.waveplate_unitary("half", math.pi / 8)
    bs = _third_splitter()
    psi = tensor(qb.dual_rail(_register(state)), basis_state((0, 0)))
    psi = lo.apply(hwp, psi, [2, 3])
    psi = lo.apply(bs, psi, [0, 4])
    psi = lo.apply(bs, psi, [1, 3])
    psi = lo.apply(bs, psi, [2, 5])
    return lo.apply(hwp, psi, [2, 3])


def coincidence_interference() -> dict[str, float]:
    """Amplitudes for control-V and target-V photons both leaving the central splitter in place."""
    u = _third_splitter()
    both_reflect = (u[0, 0] * u[1, 1]).real
    both_transmit = (u[1, 0] * u[0, 1]).real
    total = lo.apply(u, basis_state((1, 1))).amplitude((1, 1)).real
    return {"reflect_reflect": both_reflect, "transmit_transmit": both_transmit, "total": total}


def coincidence_kraus() -> np.ndarray:
    cols = []
    for j in range(4):
        out = coincidence_circuit(np.eye(4)[j])
        kept = {o: a for o, a in out.terms.items() if o[4] == 0 and o[5] == 0}
        cols.append(qb.from_dual_rail(PureState.from_terms(6, kept, out.cutoff), [(0, 1), (2, 3)]))
    return np.array(cols).T


def coincidence_cnot(state) -> list[GateResult]:
    """Post-selected CNOT: works whenever one photon is seen in each output qubit."""
    out = coincidence_circuit(_register(state))
    kept, p = ms.postselect(out, _COINCIDENCE_GROUPS)
    if kept is None:
        return [GateResult(FAILURE, 1.0, outcome="no coincidence")]
    logical = qb.from_dual_rail(kept, [(0, 1), (2, 3)])
    return [
        GateResult(SUCCESS, p, qb.normalized(logical), outcome="coincidence"),
        GateResult(FAILURE, 1 - p, outcome="no coincidence"),
    ]


# --- CS gate by teleportation through an entangled four-mode resource --------


def cs_resource() -> PureState:
    """Two single-rail Bell pairs (r1,r2), (r3,r4) with a CS between r1 and r3."""
    return PureState.from_terms(
        4,
        {(0, 1, 0, 1): 0.5, (0, 1, 1, 0): 0.5, (1, 0, 0, 1): 0.5, (1, 0, 1, 0): -0.5},
    )


def _check_resource(resource: PureState, expected: PureState, name: str) -> None:
    if resource.mode_count != expected.mode_count or abs(fidelity(resource, expected) - 1) > 1e-10:
        raise ValueError(f"malformed {name} resource state")
    if abs(resource.norm() - 1) > 1e-10:
        raise ValueError(f"{name} resource is not normalized")


def teleport_cs_gate(state, resource: PureState | None = None) -> list[GateResult]:
    """CS between two dual-rail qubits by single-rail teleportation of their logical-one rails.

    Layout: qubit 1 rails (0, 1), qubit 2 rails (2, 3), resource modes 4-7.  The
    rail pairs (1, 5) and (3, 7) go to single-rail Bell analyzers; a success
    leaves qubit 1 on modes (0, 4) and qubit 2 on (2, 6), up to Z corrections.
    """
    expected = cs_resource()
    if resource is None:
        resource = expected
    _check_resource(resource, expected, "CS teleportation")
    psi = tensor(qb.dual_rail(_register(state)), resource)
    records = ms.analyze_many(psi, [([1, 5], "single_rail"), ([3, 7], "single_rail")])
    # remaining modes after removing 1, 3, 5, 7 are 0, 2, 4, 6 -> new indices 0..3
    qubit_modes = [(0, 2), (1, 3)]
    merged: dict = {}
    for rec in records:
        first, second = rec.outcome
        if first.success and second.success:
            frame = tuple("Z" if o.kind is ms.Bell.PSI_MINUS else "I" for o in (first, second))
            logical = qb.from_dual_rail(rec.state, qubit_modes)
            correction = qb.kron(*[qb.PAULIS[f] if f != "I" else qb.I2 for f in frame])
            key = (SUCCESS, (str(first), str(second)))
            merged[key] = GateResult(
                SUCCESS, rec.probability, qb.normalized(correction @ logical),
                outcome=(str(first), str(second)), frame=frame,
            )
        else:
            measured = {
                k: o.record for k, o in enumerate((first, second)) if o.kind is ms.Bell.FAILURE
            }
            key = (FAILURE, tuple(sorted(measured.items())))
            prev = merged.get(key)
            p = rec.probability + (prev.probability if prev else 0.0)
            merged[key] = GateResult(FAILURE, p, outcome="bell failure", measured=measured)
    return list(merged.values())


# --- the 2/3 teleporter and the 4/9 CS gate -----------------------------------


def t3_resource() -> PureState:
    return PureState.from_terms(
        4, {(0, 0, 1, 1): 1 / math.sqrt(3), (1, 0, 1, 0): 1 / math.sqrt(3), (1, 1, 0, 0): 1 / math.sqrt(3)}
    )


@dataclass(frozen=True)
class TeleportBranch:
    counts: tuple[int, int, int]
    probability: float
    qubit_mode: int | None
    correction_phase: float
    state: np.ndarray | None
    measured: int | None = None


def _t3_output(vector) -> PureState:
    psi = tensor(qb.single_rail(vector), t3_resource())
    return lo.apply(lo.tritter_unitary(), psi, [0, 1, 2])


def t3_correction_phase(counts: tuple[int, int, int]) -> tuple[int, float]:
    """Output mode (0 or 1 of the two unmeasured resource modes) and the phase to add to |1>."""
    total = sum(counts)
    if total not in (1, 2):
        raise ValueError("only one or two counts herald a teleported qubit")
    mode = 1 if total == 1 else 0
    spectator = 1 if total == 1 else 0
    zero = ms.project(_t3_output([1, 0]), [0, 1, 2], counts)
    one = ms.project(_t3_output([0, 1]), [0, 1, 2], counts)
    a = zero.amplitude((spectator, 0) if mode == 1 else (0, 0))
    b = one.amplitude((spectator, 1) if mode == 1 else (1, 0))
    if abs(abs(a) - abs(b)) > 1e-12:
        raise SelfCheckError("teleporter branch is not a pure phase")
    return mode, cmath.phase(a / b)


def t3_teleporter(qubit) -> list[TeleportBranch]:
    """Teleport a single-rail qubit through the three-mode-entangled resource with a tritter.

    One or two counts in the tritter outputs teleport the qubit (success 2/3);
    zero or three counts measure it in the computational basis.
    """
    v = qb.normalized(qubit)
    if v.size != 2:
        raise ValueError("expected a single-qubit amplitude vector")
    cond = ms.condition(_t3_output(v), [0, 1, 2], [ms.ANY] * 3)
    out = []
    for br in cond.branches:
        total = sum(br.outcome)
        if total in (0, 3):
            out.append(TeleportBranch(br.outcome, br.probability, None, 0.0, None, 0 if total == 0 else 1))
            continue
        mode, phase = t3_correction_phase(br.outcome)
        raw = qb.from_single_rail(br.state, [mode])
        fixed = np.array([raw[0], raw[1] * cmath.exp(1j * phase)])
        out.append(TeleportBranch(br.outcome, br.probability, mode, phase, qb.canonical_phase(fixed)))
    return out


def composite_cs_resource() -> PureState:
    """Two teleporter resources with CS applied between every pair of their output modes."""
    pair = tensor(t3_resource(), t3_resource())
    terms = {}
    for occ, amp in pair.terms.items():
        a = occ[2] + occ[3]
        b = occ[6] + occ[7]
        terms[occ] = amp * (-1) ** (a * b)
    return PureState.from_terms(8, terms)


def teleported_cs_gate(state) -> list[GateResult]:
    """CS on two single-rail qubits by running each through a 2/3 teleporter into a shared resource.

    Modes: qubit a 0, its resource 1-4; qubit b 5, its resource 6-9.  Succeeds
    (probability 4/9) when both teleporters see one or two counts.
    """
    v = _register(state)
    psi = tensor(qb.single_rail(v), composite_cs_resource())
    # single_rail lays out (qa, qb); reorder to qa, a1..a4, qb, b1..b4
    psi = permute_modes(psi, [0, 2, 3, 4, 5, 1, 6, 7, 8, 9])
    psi = lo.apply(lo.tritter_unitary(), psi, [0, 1, 2])
    psi = lo.apply(lo.tritter_unitary(), psi, [5, 6, 7])
    cond = ms.condition(psi, [0, 1, 2, 5, 6, 7], [ms.ANY] * 6)
    results = []
    failure_p = 0.0
    for br in cond.branches:
        ca, cb = br.outcome[:3], br.outcome[3:]
        if sum(ca) not in (1, 2) or sum(cb) not in (1, 2):
            failure_p += br.probability
            continue
        # remaining modes: a3, a4, b3, b4
        mode_a, phase_a = t3_correction_phase(ca)
        mode_b, phase_b = t3_correction_phase(cb)
        raw = qb.from_single_rail(br.state, [mode_a, 2 + mode_b])
        # the CS links every output mode, so a spectator photon adds a Z on the partner
        flip_b = sum(ca) == 1
        flip_a = sum(cb) == 1
        fix = np.diag(
            [
                cmath.exp(1j * (phase_a * ia + phase_b * ib)) * (-1) ** (flip_a * ia + flip_b * ib)
                for ia in (0, 1)
                for ib in (0, 1)
            ]
        )
        results.append(
            GateResult(
                SUCCESS, br.probability, qb.normalized(fix @ raw), outcome=(ca, cb),
                frame=(phase_a, phase_b),
            )
        )
    results.append(GateResult(FAILURE, failure_p, outcome="teleporter failure"))
    return results
