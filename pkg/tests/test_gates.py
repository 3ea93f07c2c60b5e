import cmath
import math

import numpy as np
import pytest

from photonsim import fock, gates, qubits as qb
from photonsim import measurement as ms
from oracles import bs, embed, kraus_fidelity, propagate

INPUTS = [np.eye(4)[j] for j in range(4)] + [qb.normalized([1, 1, 0, 0]), qb.normalized([1, -1j, 1, 0])]


def test_ns_constants_solve_the_sign_conditions():
    t2 = gates.NS_ANCILLA_ETA
    assert gates.NS_VACUUM_ETA == pytest.approx(5 - 3 * math.sqrt(2))
    assert 7 * t2**2 - 6 * t2 + 1 == pytest.approx(0, abs=1e-15)
    assert gates.KLM_SUCCESS == pytest.approx(((3 - math.sqrt(2)) / 7) ** 2)
    assert gates.KLM_SUCCESS <= 1 / 16


def test_nonlinear_sign_against_permanents():
    # modes: signal 0, ancilla photon 1, vacuum 2
    u = embed(bs(gates.NS_ANCILLA_ETA), [1, 0], 3) @ embed(bs(gates.NS_VACUUM_ETA), [0, 2], 3)
    c = math.sqrt(gates.NS_ANCILLA_ETA)
    for k, sign in [(0, 1), (1, 1), (2, -1)]:
        out = propagate(u, {(k, 1, 0): 1})
        assert out.get((k, 1, 0), 0) == pytest.approx(sign * c, abs=1e-12)
        via_package = gates._nonlinear_sign(fock.basis_state((k, 1, 0)), 0, 1, 2)
        assert via_package.amplitude((k, 1, 0)) == pytest.approx(sign * c, abs=1e-12)


@pytest.mark.parametrize("state", INPUTS, ids=range(len(INPUTS)))
def test_klm_cnot_success_and_output(state):
    results = gates.klm_heralded_cnot(state)
    assert gates.success_probability(results) == pytest.approx(((3 - math.sqrt(2)) / 7) ** 2, abs=1e-12)
    win = next(r for r in results if r.success)
    assert qb.state_fidelity(win.state, qb.CNOT @ state) == pytest.approx(1.0, abs=1e-10)
    assert sum(r.probability for r in results) == pytest.approx(1.0)


def test_klm_kraus_is_scaled_cnot():
    k = gates.klm_kraus()
    np.testing.assert_allclose(k, math.sqrt(gates.KLM_SUCCESS) * qb.CNOT, atol=1e-12)
    assert kraus_fidelity(k, qb.CNOT) == pytest.approx(1.0, abs=1e-12)


def test_cross_kerr_gates():
    rng = np.random.default_rng(0)
    v = qb.random_qubit(rng, 2)
    np.testing.assert_allclose(gates.cross_kerr_cs(v), qb.CS @ v, atol=1e-12)
    np.testing.assert_allclose(gates.cross_kerr_cnot(v), qb.CNOT @ v, atol=1e-12)
    half = gates.cross_kerr_cs(np.ones(4) / 2, chi=math.pi / 2)
    assert half[3] == pytest.approx(0.5j)


@pytest.mark.parametrize("j", range(4))
def test_coincidence_cnot_on_basis_inputs(j):
    results = gates.coincidence_cnot(np.eye(4)[j])
    assert gates.success_probability(results) == pytest.approx(1 / 9, abs=1e-12)
    win = next(r for r in results if r.success)
    assert qb.state_fidelity(win.state, qb.CNOT @ np.eye(4)[j]) == pytest.approx(1.0, abs=1e-12)


def test_coincidence_interference_amplitude():
    amp = gates.coincidence_interference()
    # reflection 1/3 each, transmission 2/3 each with the splitter's minus sign
    assert amp["reflect_reflect"] == pytest.approx(1 / 3)
    assert amp["transmit_transmit"] == pytest.approx(-2 / 3)
    assert amp["total"] == pytest.approx(-1 / 3)
    # same splitter written out: [[r, t], [-t, r]], permanent r^2 - t^2
    assert propagate(bs(1 / 3, 0.0, math.pi), {(1, 1): 1})[(1, 1)] == pytest.approx(-1 / 3)


def test_coincidence_kraus():
    k = gates.coincidence_kraus()
    np.testing.assert_allclose(k, qb.CNOT / 3, atol=1e-12)


@pytest.mark.parametrize("state", INPUTS, ids=range(len(INPUTS)))
def test_teleport_cs(state):
    results = gates.teleport_cs_gate(state)
    assert gates.success_probability(results) == pytest.approx(0.25, abs=1e-12)
    assert sum(r.probability for r in results) == pytest.approx(1.0)
    for r in results:
        if r.success:
            assert qb.state_fidelity(r.state, qb.CS @ state) == pytest.approx(1.0, abs=1e-10)
            assert set(r.frame) <= {"I", "Z"}


def test_teleport_cs_rejects_wrong_resource():
    bad = fock.PureState.from_terms(4, {(0, 1, 0, 1): 1})
    with pytest.raises(ValueError):
        gates.teleport_cs_gate(np.eye(4)[0], bad)


def test_t3_branches():
    rng = np.random.default_rng(2)
    v = qb.random_qubit(rng)
    branches = gates.t3_teleporter(v)
    assert sum(b.probability for b in branches) == pytest.approx(1.0)
    assert sum(b.probability for b in branches if b.state is not None) == pytest.approx(2 / 3, abs=1e-12)
    for b in branches:
        if b.state is None:
            assert sum(b.counts) in (0, 3)
            continue
        assert qb.state_fidelity(b.state, v) == pytest.approx(1.0, abs=1e-12)
        # corrections are multiples of 2 pi / 3
        k = b.correction_phase / (2 * math.pi / 3)
        assert k == pytest.approx(round(k), abs=1e-9)


def test_t3_outcome_100_needs_no_correction():
    v = qb.normalized([0.6, 0.8j])
    state = ms.condition(gates._t3_output(v), [0, 1, 2], [1, 0, 0]).state
    ratio = state.amplitude((1, 1)) / state.amplitude((1, 0))
    assert ratio == pytest.approx(v[1] / v[0], abs=1e-12)
    assert gates.t3_correction_phase((1, 0, 0)) == (1, pytest.approx(0.0, abs=1e-12))
    with pytest.raises(ValueError):
        gates.t3_correction_phase((0, 0, 0))


@pytest.mark.parametrize("state", INPUTS[:5], ids=range(5))
def test_composite_cs_gate(state):
    results = gates.teleported_cs_gate(state)
    assert gates.success_probability(results) == pytest.approx(4 / 9, abs=1e-9)
    for r in results:
        if r.success:
            assert qb.state_fidelity(r.state, qb.CS @ state) == pytest.approx(1.0, abs=1e-10)


def test_register_validation():
    with pytest.raises(ValueError):
        gates.coincidence_cnot(np.zeros(4))
    with pytest.raises(ValueError):
        gates.klm_heralded_cnot(np.ones(3))
