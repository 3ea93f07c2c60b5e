import math

import numpy as np
import pytest

from photonsim import fock, qubits as qb
from photonsim import linear_optics as lo
from photonsim import measurement as ms


def hom_output():
    return lo.apply(lo.balanced_beamsplitter(), fock.basis_state((1, 1)))


def test_outcome_distribution_sums_to_one():
    dist = ms.outcome_distribution(hom_output(), [0, 1])
    assert dist == pytest.approx({(0, 2): 0.5, (2, 0): 0.5})


def test_detector_efficiency_thins_binomially():
    dist = ms.outcome_distribution(fock.basis_state((2,)), [0], efficiency=0.5)
    assert dist == pytest.approx({(0,): 0.25, (1,): 0.5, (2,): 0.25})
    with pytest.raises(ValueError):
        ms.outcome_distribution(fock.basis_state((1,)), [0], efficiency=1.5)


def test_condition_removes_measured_modes():
    psi = fock.PureState.from_terms(3, {(1, 0, 1): 1, (0, 1, 1): 1j})
    state, p = ms.condition(psi, [0], [1])
    assert p == pytest.approx(0.5)
    assert dict(state.terms) == {(0, 1): pytest.approx(1)}
    assert ms.condition(psi, [2], [0]).empty


def test_condition_with_count_rules():
    psi = fock.normalize(fock.PureState.from_terms(2, {(0, 1): 1, (1, 1): 1, (2, 0): 1}))
    result = ms.condition(psi, [0], [ms.at_least(1)])
    assert result.probability == pytest.approx(2 / 3)
    assert len(result.branches) == 2
    with pytest.raises(ValueError):
        _ = result.state


def test_postselect_keeps_modes():
    psi = fock.normalize(fock.PureState.from_terms(2, {(1, 0): 1, (2, 0): 1}))
    kept, p = ms.postselect(psi, [([0, 1], ms.exactly(1))])
    assert p == pytest.approx(0.5)
    assert kept.mode_count == 2


def test_sampling_frequencies():
    rng = np.random.default_rng(0)
    shots = ms.sample(hom_output(), [0, 1], rng, shots=20000)
    frac = sum(s == (2, 0) for s in shots) / len(shots)
    assert abs(frac - 0.5) < 5 * math.sqrt(0.25 / 20000)
    csv_text = ms.outcomes_to_csv(ms.outcome_distribution(hom_output(), [0, 1]))
    assert csv_text.splitlines()[0] == "mode_0,mode_1,probability"


BELL = {
    "PhiPlus": [1, 0, 0, 1],
    "PhiMinus": [1, 0, 0, -1],
    "PsiPlus": [0, 1, 1, 0],
    "PsiMinus": [0, 1, -1, 0],
}


def _table(fn, name):
    return {str(k): v for k, v in fn(qb.dual_rail(qb.normalized(BELL[name]))).items()}


def test_polarizing_analyzer_resolves_phi_states():
    assert _table(ms.bell_analyzer_polarizing, "PhiPlus") == pytest.approx({"PhiPlus": 1.0})
    assert _table(ms.bell_analyzer_polarizing, "PhiMinus") == pytest.approx({"PhiMinus": 1.0})
    psi_plus = _table(ms.bell_analyzer_polarizing, "PsiPlus")
    assert sum(v for k, v in psi_plus.items() if k.startswith("Phi")) == pytest.approx(0, abs=1e-12)


def test_balanced_analyzer_resolves_psi_minus_only():
    assert _table(ms.bell_analyzer_50_50, "PsiMinus") == pytest.approx({"PsiMinus": 1.0})
    for name in ("PhiPlus", "PhiMinus", "PsiPlus"):
        assert _table(ms.bell_analyzer_50_50, name).get("PsiMinus", 0) == pytest.approx(0, abs=1e-12)


def test_analyzers_succeed_half_the_time_on_random_pairs():
    rng = np.random.default_rng(4)
    for _ in range(5):
        a, b = qb.random_qubit(rng), qb.random_qubit(rng)
        psi = qb.dual_rail(np.kron(a, b))
        # success on the Bell pair it resolves averages to the overlap, total over both resolvable states
        total = ms.success_probability(ms.bell_analyzer_polarizing(psi))
        overlap = sum(abs(np.vdot(qb.normalized(BELL[n]), np.kron(a, b))) ** 2 for n in ("PhiPlus", "PhiMinus"))
        assert total == pytest.approx(overlap, abs=1e-12)


def test_single_rail_analyzer():
    plus = qb.single_rail(qb.normalized([0, 1, 1, 0]))
    minus = qb.single_rail(qb.normalized([0, 1, -1, 0]))
    assert {str(k): v for k, v in ms.bell_analyzer_single_rail(plus).items()} == pytest.approx({"PsiPlus": 1.0})
    assert {str(k): v for k, v in ms.bell_analyzer_single_rail(minus).items()} == pytest.approx({"PsiMinus": 1.0})


def test_analyzer_width_checked():
    with pytest.raises(ValueError):
        ms.analyze(fock.vacuum(4), [0, 1], "polarizing")
