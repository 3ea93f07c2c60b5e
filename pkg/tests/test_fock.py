import json
import math
import warnings

import numpy as np
import pytest

from photonsim import fock


def test_from_terms_prunes_and_merges():
    psi = fock.PureState.from_terms(2, [((1, 0), 0.5), ((1, 0), 0.5), ((0, 1), 1e-17)])
    assert dict(psi.terms) == {(1, 0): 1.0}


def test_from_terms_validation():
    with pytest.raises(ValueError):
        fock.PureState.from_terms(2, {(1,): 1})
    with pytest.raises(ValueError):
        fock.PureState.from_terms(1, {(-1,): 1})
    with pytest.raises(fock.CutoffError):
        fock.PureState.from_terms(1, {(7,): 1}, cutoff=6)


def test_normalize_and_zero_vector():
    psi = fock.normalize(fock.PureState.from_terms(2, {(1, 0): 3, (0, 1): 4j}))
    assert psi.norm() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fock.normalize(fock.PureState.from_terms(1, {}))


def test_inner_product_conjugates_the_bra():
    a = fock.PureState.from_terms(1, {(1,): 1j})
    b = fock.PureState.from_terms(1, {(1,): 1})
    assert fock.inner_product(a, b) == pytest.approx(-1j)
    assert fock.fidelity(a, b) == pytest.approx(1.0)


def test_tensor_and_permute():
    a = fock.single_photon(2, 0)
    b = fock.basis_state((0, 2))
    joint = fock.tensor(a, b)
    assert dict(joint.terms) == {(1, 0, 0, 2): 1}
    assert dict(fock.permute_modes(joint, [3, 2, 1, 0]).terms) == {(2, 0, 0, 1): 1}
    assert dict(fock.select_modes(joint, [0, 1]).terms) == {(1, 0): 1}
    with pytest.raises(ValueError):
        fock.permute_modes(joint, [0, 0, 1, 2])


def test_select_modes_rejects_entangled_tail():
    bell = fock.PureState.from_terms(2, {(1, 0): 1, (0, 1): 1})
    with pytest.raises(ValueError):
        fock.select_modes(bell, [0])


def test_json_round_trip():
    psi = fock.PureState.from_terms(3, {(1, 0, 1): 0.6, (0, 2, 0): 0.8j}, cutoff=4)
    back = fock.PureState.from_json(psi.to_json())
    assert back.mode_count == 3 and back.cutoff == 4
    assert dict(back.terms) == dict(psi.terms)
    assert json.loads(psi.to_json())["terms"][0]["occ"] == [0, 2, 0]
    with pytest.raises(ValueError):
        fock.PureState.from_dict({"terms": []})


def test_coherent_state_is_poissonian():
    alpha = 0.7 + 0.2j
    psi = fock.coherent_state(alpha, cutoff=25)
    mean = abs(alpha) ** 2
    for n in range(6):
        want = math.exp(-mean) * mean**n / math.factorial(n)
        assert abs(psi.amplitude((n,))) ** 2 == pytest.approx(want, rel=1e-12)


def test_coherent_truncation_warning():
    with pytest.warns(fock.TruncationWarning):
        fock.coherent_state(3.0, cutoff=4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fock.coherent_state(0.3, cutoff=10)


def test_coherent_overlap_against_truncated_states():
    a, b = 0.4 + 0.1j, -0.2 + 0.5j
    numeric = fock.inner_product(fock.coherent_state(a, 30), fock.coherent_state(b, 30))
    assert numeric == pytest.approx(fock.coherent_overlap(a, b), abs=1e-12)


def test_down_conversion_pairs_only():
    psi = fock.two_mode_down_conversion(0.3, cutoff=8)
    assert all(o[0] == o[1] for o in psi.terms)
    assert psi.norm() == pytest.approx(1.0)
    ratio = abs(psi.amplitude((2, 2)) / psi.amplitude((1, 1)))
    assert ratio == pytest.approx(0.3)
    kept = sum(0.09**n for n in range(5)) * (1 - 0.09)
    assert psi.truncated_weight == pytest.approx(1 - kept)


def test_chi_from_gain():
    assert fock.chi_from_gain(1.0) == 0.0
    assert fock.chi_from_gain(2.0) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        fock.chi_from_gain(0.5)


def test_attenuated_lasers_emit_doubles_half_as_often_as_pairs():
    stats = fock.photon_statistics(fock.two_attenuated_lasers(0.2, cutoff=10), [0, 1])
    assert stats[(2, 0)] / stats[(1, 1)] == pytest.approx(0.5, abs=1e-12)


def test_wigner_origin_of_fock_mixtures():
    assert fock.wigner_at_origin(fock.DiagonalFockMixture({0: 1.0})) == pytest.approx(1 / math.pi)
    assert fock.wigner_at_origin(fock.DiagonalFockMixture({1: 1.0})) == pytest.approx(-1 / math.pi)
    with pytest.raises(ValueError):
        fock.DiagonalFockMixture({0: 0.5})
