import csv
import io
import math

import numpy as np
import pytest

from photonsim import qkd


def run(**kw):
    kw.setdefault("n_pulses", 100_000)
    return qkd.run_bb84(qkd.Bb84Config(**kw))


def test_no_eavesdropper():
    r = run(rng_seed=0)
    assert r.qber == 0.0
    assert r.decision == "proceed"
    n = 100_000
    assert abs(r.sifted_length - n / 2) < 5 * math.sqrt(n / 4)


@pytest.mark.parametrize("eve", ["intercept", "intercept-random"])
def test_intercept_resend_error_rate(eve):
    r = run(eve=eve, rng_seed=1)
    sigma = math.sqrt(0.25 * 0.75 / r.disclosed)
    assert abs(r.qber - 0.25) < 5 * sigma
    assert r.decision == "abort"
    assert r.key.size == 0


def test_loss_is_basis_blind():
    base = run(depolarize_prob=0.2, rng_seed=2)
    lossy = run(depolarize_prob=0.2, loss_prob=0.6, rng_seed=2)
    assert lossy.sifted_length / base.sifted_length == pytest.approx(0.4, abs=0.02)
    for r in (base, lossy):
        sigma = math.sqrt(0.1 * 0.9 / r.disclosed)
        assert abs(r.qber - 0.1) < 5 * sigma


def test_qber_estimator_is_unbiased():
    qbers = [run(n_pulses=4000, depolarize_prob=0.3, rng_seed=s).qber for s in range(100)]
    stderr = np.std(qbers, ddof=1) / math.sqrt(len(qbers))
    assert abs(np.mean(qbers) - 0.15) < 5 * stderr


def test_seed_determinism_and_transcript():
    a = run(n_pulses=70_000, eve="intercept", rng_seed=9)
    b = run(n_pulses=70_000, eve="intercept", rng_seed=9)
    assert a.summary() == b.summary()
    rows = list(csv.DictReader(io.StringIO(a.transcript_csv())))
    assert list(rows[0]) == ["pulse", "alice_basis", "bob_basis", "bit", "kept"]
    assert len(rows) == 70_000
    assert sum(int(r["kept"]) for r in rows) == a.sifted_length


def test_errors_and_validation():
    with pytest.raises(qkd.ProtocolError):
        run(n_pulses=100, loss_prob=1.0)
    with pytest.raises(ValueError):
        qkd.Bb84Config(10, loss_prob=1.5)
    with pytest.raises(ValueError):
        qkd.Bb84Config(10, eve="pns")
    assert run(n_pulses=1000, abort_qber=0.3, eve="intercept").decision == "proceed"


@pytest.mark.parametrize("bit", [0, 1])
def test_wrong_basis_resend_is_maximally_mixed(bit):
    np.testing.assert_allclose(qkd.resend_density_matrix(bit, "DA", "HV"), np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(qkd.resend_density_matrix(bit, "HV", "DA"), np.eye(2) / 2, atol=1e-12)
    v = qkd.basis_state(bit, "DA")
    np.testing.assert_allclose(qkd.resend_density_matrix(bit, "DA", "DA"), np.outer(v, v.conj()), atol=1e-12)


def test_time_bin_states_are_mutually_unbiased():
    states = qkd.temporal_encoding_states()
    for s in states.values():
        assert s.norm() == pytest.approx(1.0)
    overlaps = qkd.basis_overlaps(states)
    assert overlaps[("T1+T2", "T1-T2")] == pytest.approx(0, abs=1e-15)
    assert overlaps[("T1+iT2", "T1-iT2")] == pytest.approx(0, abs=1e-15)
    for pair in [("T1+T2", "T1+iT2"), ("T1-T2", "T1-iT2"), ("T1+T2", "T1-iT2")]:
        assert overlaps[pair] == pytest.approx(0.5, abs=1e-12)


def test_multi_photon_fraction_of_attenuated_pulses():
    mu = 0.1
    want = 1 - mu * math.exp(-mu) / (1 - math.exp(-mu))
    assert qkd.multi_photon_fraction(mu) == pytest.approx(want, rel=1e-9)


def test_cv_link():
    clean = qkd.run_cv_qkd(200_000, 10.0, rng_seed=0)
    assert clean["snr_B"] == pytest.approx(10.0, rel=0.03)
    assert abs(clean["excess_noise_estimate"]) < 0.05
    attacked = qkd.run_cv_qkd(200_000, 10.0, rng_seed=0, eavesdropper=True)
    assert attacked["excess_noise_estimate"] == pytest.approx(2.0, abs=0.1)
    lossy = qkd.run_cv_qkd(200_000, 10.0, channel_loss=0.5, rng_seed=0, eavesdropper=True)
    assert lossy["excess_noise_estimate"] == pytest.approx(2.0, abs=0.15)
    assert qkd.run_cv_qkd(1000, 0.0)["snr_B"] == 0.0
