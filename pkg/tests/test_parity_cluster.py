import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photonsim import cluster, parity, qubits as qb


def test_codewords():
    np.testing.assert_allclose(parity.parity_codeword(0, 2), np.array([1, 0, 0, 1]) / math.sqrt(2))
    np.testing.assert_allclose(parity.parity_codeword(1, 2), np.array([0, 1, 1, 0]) / math.sqrt(2))
    for n in range(1, 5):
        assert abs(np.vdot(parity.parity_codeword(0, n), parity.parity_codeword(1, n))) < 1e-15


@pytest.mark.parametrize("cnot", ["ideal", "coincidence", "klm"])
def test_two_qubit_encoding_from_cnot(cnot):
    v = qb.normalized([0.3, 0.4 + 0.5j])
    code, p = parity.parity_encode_2(v, cnot)
    assert qb.state_fidelity(code.logical(), v) == pytest.approx(1.0, abs=1e-10)
    assert p == pytest.approx({"ideal": 1.0, "coincidence": 1 / 9, "klm": 0.0513207882808455}[cnot])


def test_logical_operations():
    v = qb.normalized([0.8, 0.6j])
    code = parity.parity_encode(v, 3)
    np.testing.assert_allclose(parity.parity_z(code).logical(), qb.Z @ v, atol=1e-12)
    for q in range(3):
        rotated = parity.parity_x_rotation(code, 0.7, q)
        np.testing.assert_allclose(rotated.logical(), qb.x_rotation(0.7) @ v, atol=1e-12)
    with pytest.raises(ValueError):
        parity.ParityEncodedQubit(np.eye(8)[1]).logical()


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_z_measurement_keeps_the_logical_state(n, seed):
    v = qb.random_qubit(np.random.default_rng(seed))
    code = parity.parity_encode(v, n)
    outcomes = parity.parity_z_measure(code, n // 2)
    assert sum(r.probability for r in outcomes) == pytest.approx(1.0)
    for r in outcomes:
        assert r.code.n == n - 1
        assert qb.state_fidelity(r.code.logical(), v) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("m,n", [(2, 1), (3, 2), (2, 0)])
def test_fusion_outcomes(m, n):
    v = qb.random_qubit(np.random.default_rng(m + 10 * n))
    results = parity.fusion_type_II(parity.parity_encode(v, m), n)
    assert sum(r.probability for r in results) == pytest.approx(1.0)
    assert sum(r.probability for r in results if r.success) == pytest.approx(0.5, abs=1e-12)
    for r in results:
        assert r.probability == pytest.approx(0.25, abs=1e-12)
        if r.success:
            assert r.code.n == m + n
        else:
            assert r.code.n == m - 1
            assert r.resource.n == n + 1
            np.testing.assert_allclose(r.resource.logical(), [1, 0], atol=1e-10)
        assert qb.state_fidelity(r.code.logical(), v) == pytest.approx(1.0, abs=1e-10)


def test_fusion_on_a_single_qubit_loses_it():
    results = parity.fusion_type_II(parity.parity_encode([1, 0], 1), 2)
    assert all(r.code is None for r in results if not r.success)


def test_fusion_expected_change():
    # half the time +n, half the time -1
    rng = np.random.default_rng(0)
    change = parity.fusion_expected_change(2, 200_000, rng)
    assert change == pytest.approx(0.5, abs=5 * 1.5 / math.sqrt(200_000))


def test_encoded_cs_closed_form_and_sampling():
    p = 2 / 3
    assert parity.encoded_cs_success(p) == pytest.approx((p**2 * (3 - 2 * p)) ** 2)
    # enumerate the three-draw game directly
    block = sum(
        math.prod(p if s else 1 - p for s in seq)
        for seq in [(1, 1), (1, 0, 1), (0, 1, 1)]
    )
    assert parity.encoded_cs_success(p) == pytest.approx(block**2)
    mc = parity.encoded_cs_monte_carlo(200_000, np.random.default_rng(1), p)
    sigma = math.sqrt(block**2 * (1 - block**2) / 200_000)
    assert abs(mc["encoded"] - block**2) < 5 * sigma
    assert abs(mc["unencoded"] - p**2) < 5 * math.sqrt(p**2 * (1 - p**2) / 200_000)
    assert parity.encoded_cs_success(0.5) == pytest.approx(0.25)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * math.pi))
def test_cluster_rotation_all_branches(seed, theta):
    v = qb.random_qubit(np.random.default_rng(seed))
    branches = cluster.cluster_x_rotation(v, theta)
    assert len(branches) == 4
    target = qb.x_rotation(theta) @ v
    for b in branches:
        assert b.probability == pytest.approx(0.25, abs=1e-12)
        assert qb.state_fidelity(b.state, target) == pytest.approx(1.0, abs=1e-10)
    assert {b.frame for b in branches} == {"I", "X", "Z", "XZ"}


def test_cluster_state_is_linear_graph_state():
    v = qb.normalized([1, 0])
    psi = cluster.cluster_state(v)
    plus = qb.normalized([1, 1])
    direct = qb.cs_between(1, 2, 3) @ qb.cs_between(0, 1, 3) @ qb.kron(v, plus, plus)
    np.testing.assert_allclose(psi, direct, atol=1e-12)


def test_sample_cluster_branch_is_one_of_four():
    b = cluster.sample_cluster_x_rotation([1, 0], 0.3, np.random.default_rng(0))
    assert b.results in {(0, 0), (0, 1), (1, 0), (1, 1)}
