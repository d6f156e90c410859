"""Soft front end: frozen scalar values, noise statistics, ML tie to soft weight."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grandlab.channel import (
    ChannelParams,
    awgn_transmit,
    compute_llr,
    hard_decision,
    make_frame_rng,
    modulate_bpsk,
    receive,
    sigma_from_ebn0,
    soft_weight,
)
from grandlab.codes import encode, hamming_code
from grandlab.errors import ConfigError
from grandlab.gf2 import BitVector


def test_sigma_frozen_values():
    assert sigma_from_ebn0(0.0, 0.5) == 1.0
    assert sigma_from_ebn0(0.0, 105 / 128) == pytest.approx(0.78072, abs=1e-5)
    assert sigma_from_ebn0(10.0, 1.0) == pytest.approx(0.22361, abs=1e-5)


def test_sigma_rejects_nonpositive_rate():
    with pytest.raises(ConfigError):
        sigma_from_ebn0(0.0, 0.0)


def test_channel_params_carries_consistent_sigma():
    p = ChannelParams.from_ebn0(3.0, 4 / 7)
    assert p.sigma == sigma_from_ebn0(3.0, 4 / 7)


def test_modulate_antipodal():
    x = modulate_bpsk(BitVector.from_bits([0, 1, 1, 0]))
    assert x.tolist() == [1.0, -1.0, -1.0, 1.0]


def test_hard_decision_boundary():
    z = hard_decision(np.array([0.3, -0.2, 0.0]))
    assert z.to_list() == [0, 1, 0]


def test_llr_scaling():
    r = compute_llr(np.array([1.0, -2.0]), 2.0)
    assert r.tolist() == [0.5, -1.0]


def test_soft_weight_examples():
    reliab = [0.5, 9.0, 0.25]
    assert soft_weight(BitVector.from_bits([1, 0, 1]), reliab) == 0.75
    assert soft_weight(BitVector.zeros(3), reliab) == 0.0


@given(st.lists(st.integers(0, 1), min_size=1, max_size=16), st.data())
def test_soft_weight_additive_over_disjoint_support(ebits, data):
    n = len(ebits)
    reliab = data.draw(
        st.lists(st.floats(0, 10, allow_nan=False), min_size=n, max_size=n)
    )
    e = BitVector.from_bits(ebits)
    # split the support into even/odd halves: disjoint by construction
    even = BitVector(n, e.bits & int("01" * n, 2) if n else 0)
    odd = BitVector(n, e.bits ^ even.bits)
    total = soft_weight(e, reliab)
    assert total == pytest.approx(soft_weight(even, reliab) + soft_weight(odd, reliab))
    assert total >= 0.0


def test_awgn_moments_within_bounds():
    sigma = 1.3
    rng = make_frame_rng(12345, 0)
    x = np.zeros(1_000_000)
    y = awgn_transmit(x, sigma, rng)
    assert abs(y.mean()) <= 4 * sigma / 1000  # four standard errors
    assert abs(y.var() - sigma**2) / sigma**2 <= 0.02


def test_frame_rng_is_keyed_by_seed_and_frame():
    a = make_frame_rng(7, 3).standard_normal(8)
    b = make_frame_rng(7, 3).standard_normal(8)
    c = make_frame_rng(7, 4).standard_normal(8)
    d = make_frame_rng(8, 3).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_receive_bundles_consistent_views():
    y = np.array([0.9, -0.1, 0.4])
    f = receive(y, 0.5)
    assert f.z.to_list() == [0, 1, 0]
    assert np.array_equal(f.reliab, np.abs(f.r))
    assert f.r[0] == pytest.approx(2 * 0.9 / 0.25)


def test_ml_codeword_is_lightest_soft_weight():
    # exhaustive over the [7,4] code: the likelihood argmax and the
    # Gamma(z + c) argmin coincide frame by frame
    code = hamming_code(3)
    codewords = [
        encode(code, BitVector.from_bits(bits))
        for bits in itertools.product([0, 1], repeat=4)
    ]
    sigma = sigma_from_ebn0(1.0, code.rate)
    for frame in range(300):
        rng = make_frame_rng(555, frame)
        c = codewords[frame % 16]
        y = awgn_transmit(modulate_bpsk(c), sigma, rng)
        f = receive(y, sigma)

        def loglik(w):
            x = modulate_bpsk(w)
            return -float(np.sum((y - x) ** 2)) / (2 * sigma * sigma)

        best_ml = max(codewords, key=loglik)
        best_gamma = min(codewords, key=lambda w: soft_weight(f.z ^ w, f.reliab))
        assert best_ml == best_gamma


def test_gamma_orders_like_likelihood():
    # beyond the argmax: Gamma sorts all 16 codewords exactly opposite to likelihood
    code = hamming_code(3)
    codewords = [
        encode(code, BitVector.from_bits(bits))
        for bits in itertools.product([0, 1], repeat=4)
    ]
    sigma = sigma_from_ebn0(2.0, code.rate)
    rng = make_frame_rng(31, 0)
    y = awgn_transmit(modulate_bpsk(codewords[5]), sigma, rng)
    f = receive(y, sigma)
    by_gamma = sorted(codewords, key=lambda w: soft_weight(f.z ^ w, f.reliab))
    by_lik = sorted(
        codewords,
        key=lambda w: float(np.sum((y - modulate_bpsk(w)) ** 2)),
    )
    assert by_gamma == by_lik
