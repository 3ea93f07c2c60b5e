import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from photonsim import cv

OMEGA = np.kron(np.eye(2), np.array([[0, 1], [-1, 0]]))
gains = st.floats(1.0, 50.0)


@settings(max_examples=30, deadline=None)
@given(gains, st.floats(0, 1))
def test_symplectic_maps(g, t):
    for s in (cv.amplifier_symplectic(g), cv.beamsplitter_symplectic(t)):
        np.testing.assert_allclose(s @ OMEGA @ s.T, OMEGA, atol=1e-9 * g)
    bs = cv.beamsplitter_symplectic(t)
    np.testing.assert_allclose(bs @ bs.T, np.eye(4), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(gains)
def test_epr_covariance(g):
    cov = cv.epr_source(g).cov
    c = 2 * math.sqrt(g * (g - 1))
    want = np.array([[2 * g - 1, 0, c, 0], [0, 2 * g - 1, 0, -c], [c, 0, 2 * g - 1, 0], [0, -c, 0, 2 * g - 1]])
    np.testing.assert_allclose(cov, want, atol=1e-9 * g)
    np.testing.assert_allclose(cv.epr_from_squeezers(g).cov, cov, atol=1e-9 * g)


def test_epr_at_gain_five():
    corr = cv.epr_correlations(5.0)
    assert corr["variance"] == pytest.approx(9.0)
    assert corr["plus"] == pytest.approx(math.sqrt(80))
    assert corr["minus"] == pytest.approx(-math.sqrt(80))


@pytest.mark.parametrize("g", [0.0, 0.5, 1.0, 1.7])
def test_classical_teleporter_variances(g):
    out = cv.teleport_cv(cv.coherent(3.0), g, None)
    # receiver vacuum plus g^2 times (input vacuum + sender vacuum)
    assert out.variances() == pytest.approx((1 + 2 * g**2, 1 + 2 * g**2), abs=1e-12)
    np.testing.assert_allclose(out.mean, [6 * g, 0], atol=1e-12)


def test_classical_teleporter_fidelity_at_alpha_ten():
    vp, vm = cv.teleport_cv(cv.coherent(10.0), 1.0, None).variances()
    assert cv.fidelity_gaussian(vp, vm, 10.0, 1.0) == pytest.approx(0.5, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(gains)
def test_added_noise_closed_form(g):
    vp, vm = cv.teleport_cv(cv.vacuum(1), 1.0, g).variances()
    e2 = (math.sqrt(g) - math.sqrt(g - 1)) ** 2
    assert vp - 1 == pytest.approx(2 * e2, abs=1e-9)
    assert vm - 1 == pytest.approx(2 * e2, abs=1e-9)
    assert cv.added_noise(g) == pytest.approx(2 * e2, abs=1e-12)


def test_fidelity_of_vacuum_to_itself():
    assert cv.fidelity_gaussian(1.0, 1.0, 0.0, 1.0) == pytest.approx(1.0)
    # quantum teleportation beats the classical limit for any G > 1
    vp, vm = cv.teleport_cv(cv.coherent(10.0), 1.0, 2.0).variances()
    assert cv.fidelity_gaussian(vp, vm, 10.0, 1.0) > 0.5


def test_sampler_matches_covariance():
    rng = np.random.default_rng(11)
    shots = 100_000
    samples = cv.sample_teleport_cv(cv.coherent(1.0 + 0.5j), 0.8, 3.0, shots, rng)
    analytic = cv.teleport_cv(cv.coherent(1.0 + 0.5j), 0.8, 3.0)
    emp_cov = np.cov(samples.T)
    for i in range(2):
        sigma = analytic.cov[i, i] * math.sqrt(2 / shots)
        assert abs(emp_cov[i, i] - analytic.cov[i, i]) < 5 * sigma
        assert abs(samples[:, i].mean() - analytic.mean[i]) < 5 * math.sqrt(analytic.cov[i, i] / shots)


def test_tv_of_the_classical_teleporter():
    tv = cv.teleporter_tv(1.0, None)
    assert tv["T_plus"] == pytest.approx(1 / 3)
    assert tv["T_q"] == pytest.approx(2 / 3, abs=1e-12)
    assert tv["V_q"] == pytest.approx(4.0, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(1.01, 30.0))
def test_tv_unity_gain_closed_forms(g):
    tv = cv.teleporter_tv(1.0, g)
    ref = cv.unity_gain_figures(g)
    assert tv["T_q"] == pytest.approx(ref["T_q"], rel=1e-9)
    assert tv["V_q"] == pytest.approx(ref["V_q"], rel=1e-9)


def test_tv_crossover_at_two_thirds_fidelity():
    cross = cv.tv_crossover()
    # (T_q, V_q) = (1, 1) needs e^2 = 1/2, i.e. sqrt(G) - sqrt(G-1) = 1/sqrt(2): G = 9/8
    assert cross["G"] == pytest.approx(9 / 8, abs=1e-9)
    assert cross["F"] == pytest.approx(2 / 3, abs=1e-9)


def test_gain_sweep_rows():
    rows = cv.gain_sweep(np.linspace(0, 1.5, 4), 5.0)
    assert [r["g"] for r in rows] == pytest.approx([0, 0.5, 1.0, 1.5])
    best = max(rows, key=lambda r: r["F"])
    assert best["g"] == 1.0


def test_arthurs_goodman_and_errors():
    assert cv.arthurs_goodman_check(2.0, 0.5)
    assert not cv.arthurs_goodman_check(0.5, 0.5)
    with pytest.raises(ValueError):
        cv.transfer_coefficient(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        cv.amplifier_symplectic(0.5)
