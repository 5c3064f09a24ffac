import math

import numpy as np
import pytest

from dcskcd.analytic import exact_ber_nc
from dcskcd.chaos import carrier_batch
from dcskcd.errors import ConfigurationError, FramingError, InvalidUserError
from dcskcd.modem import dcsk_correlate, dcsk_demodulate, dcsk_modulate, gml_detect, gml_statistics
from dcskcd.spreading import compose_user_signal, walsh


def test_repeat_and_reverse():
    r = np.array([1.0, -2.0, 0.5])
    assert np.array_equal(dcsk_modulate([1], r, 3), np.concatenate([r, r]))
    assert np.array_equal(dcsk_modulate([0], r, 3), np.concatenate([r, -r]))


def test_correlator_values():
    r = np.array([1.0, -2.0, 0.5])
    z1 = dcsk_correlate(np.concatenate([r, r]), 3)
    z0 = dcsk_correlate(np.concatenate([r, -r]), 3)
    assert z1.value == r @ r and z1.bit == 1
    assert z0.value == -(r @ r) and z0.bit == 0
    assert dcsk_correlate(np.zeros(6), 3).bit == 0


def test_noiseless_loopback():
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, 100)
    carrier = rng.normal(size=100 * 16)
    assert np.array_equal(dcsk_demodulate(dcsk_modulate(bits, carrier, 16), 16), bits)


def test_antipodal():
    rng = np.random.default_rng(1)
    r = rng.normal(size=20)
    a = dcsk_correlate(dcsk_modulate([1], r, 20), 20).value
    b = dcsk_correlate(dcsk_modulate([0], r, 20), 20).value
    assert a == -b


def test_errors():
    with pytest.raises(FramingError):
        dcsk_correlate(np.zeros(7), 3)
    with pytest.raises(ConfigurationError):
        dcsk_modulate([1], np.ones(4), 0)
    with pytest.raises(InvalidUserError):
        gml_detect(np.zeros(16), 3, walsh(4), 4)


def test_gml_two_users_noiseless():
    rng = np.random.default_rng(2)
    w = walsh(4)
    rx = (compose_user_signal(1, 1, rng.normal(size=8), w)
          + compose_user_signal(2, 0, rng.normal(size=8), w))
    assert gml_detect(rx, 1, w, 8).bit == 1
    assert gml_detect(rx, 2, w, 8).bit == 0


def test_gml_all_zero_tie():
    z = gml_detect(np.zeros(16), 1, walsh(4), 4)
    assert z.value == 0 and z.bit == 0


def test_gml_single_user_matches_correlator():
    # with U = 1 the despread energies differ by 4 * (data . reference)
    rng = np.random.default_rng(3)
    w = walsh(2)
    beta = 16
    frames = rng.normal(size=(10**4, 2 * beta))
    for fr in frames:
        z_c = dcsk_correlate(fr, beta).value
        z_g = gml_detect(fr, 1, w, beta).value
        assert np.sign(z_c) == np.sign(z_g)
        assert math.isclose(z_g, 4 * z_c, rel_tol=1e-9, abs_tol=1e-9)


@pytest.mark.parametrize("order", [2, 4, 8, 16])
def test_gml_noiseless_any_pattern(order):
    rng = np.random.default_rng(order)
    w = walsh(order)
    users = order // 2
    for _ in range(20):
        bits = rng.integers(0, 2, users)
        rx = sum(compose_user_signal(u + 1, bits[u], rng.normal(size=6), w) for u in range(users))
        assert np.array_equal((gml_statistics(rx, w) > 0).astype(int), bits)


def _awgn_ber(beta, ebn0_db, nbits, seed):
    rng = np.random.default_rng(seed)
    carrier = carrier_batch(rng, nbits, beta, 1.0)
    bits = rng.integers(0, 2, nbits)
    tx = np.concatenate([carrier, (2 * bits - 1)[:, None] * carrier], axis=1)
    n0 = 2 * beta / 10 ** (ebn0_db / 10)
    rx = tx + rng.normal(0, math.sqrt(n0 / 2), size=tx.shape)
    z = np.einsum("ij,ij->i", rx[:, :beta], rx[:, beta:])
    return np.count_nonzero((z > 0).astype(int) != bits) / nbits


def test_awgn_tracks_analytic():
    # single path without fading: exact_ber_nc with L = 1 and a very large m
    expected = exact_ber_nc(15.0, 1e6, 1, 64)
    ber = _awgn_ber(64, 15.0, 200_000, 4)
    assert abs(ber / expected - 1) < 0.3


@pytest.mark.xfail(strict=True, reason="the Gaussian approximation behind the analytic "
                   "BER overestimates the AWGN error rate at beta=64, 15 dB by about 20%")
def test_awgn_within_three_sigma():
    nbits = 200_000
    expected = exact_ber_nc(15.0, 1e6, 1, 64)
    ber = _awgn_ber(64, 15.0, nbits, 4)
    sigma = math.sqrt(expected * (1 - expected) / nbits)
    assert abs(ber - expected) < 3 * sigma


def test_awgn_low_snr_within_three_sigma():
    nbits = 200_000
    expected = exact_ber_nc(6.0, 1e6, 1, 64)
    ber = _awgn_ber(64, 6.0, nbits, 5)
    sigma = math.sqrt(expected * (1 - expected) / nbits)
    assert abs(ber - expected) < 3 * sigma
