from wsnstego.stego import *
from wsnstego.dct import DctPlane, capacity, nonzero_ac_count
from wsnstego.stego.f5 import expected_capacity
from wsnstego.prng import derive_seed

from .utils import *

import numpy as np
import pytest


def test_f5_lsb():
    assert f5_lsb([3, -1, -2, 0]).tolist() == [1, 0, 1, 0]
    c = np.arange(-20, 21)
    c = c[np.abs(c) >= 2]
    # decreasing a magnitude of two or more flips the LSB
    assert np.all(f5_lsb(c) != f5_lsb(c - np.sign(c)))
    # shrinkage: 1 -> 0 flips, -1 -> 0 does not
    assert f5_lsb([1, 0]).tolist() == [1, 0]
    assert f5_lsb([-1, 0]).tolist() == [0, 0]


def test_roundtrip():
    for seed in range(3):
        plane = random_plane(seed)
        for rate in (0.05, 0.1, 0.2):
            message = random_bits(seed, capacity(plane, rate))
            key = StegoKey(seed * 10 + 1)
            for p in (1, 2, 3):
                stego, report = f5_embed(plane, message, key, p)
                assert np.array_equal(f5_extract(stego, key, len(message), p), message)
                assert report.bits_embedded == len(message)
                assert report.coefficients_changed == len(attack_map(plane, stego))
                assert report.extra["p"] == p


@pytest.mark.slow
def test_roundtrip_many():
    for seed in range(10):
        plane = random_plane(seed)
        for rate in (0.05, 0.1, 0.2):
            n_bits = capacity(plane, rate)
            p = choose_f5_p(plane, n_bits)
            # 1000 messages per rate over the ten planes
            for trial in range(1000 // 10):
                key = StegoKey(derive_seed(seed, trial))
                message = random_message(key, n_bits)
                stego, _ = f5_embed(plane, message, key, p)
                assert np.array_equal(f5_extract(stego, key, n_bits, p), message)


def test_magnitudes_only_shrink():
    plane = random_plane(4)
    message = random_bits(4, capacity(plane, 0.2))
    stego, report = f5_embed(plane, message, StegoKey(4), 2)
    before = plane.ac_coefficients().astype(int)
    after = stego.ac_coefficients().astype(int)
    changed = before != after
    assert np.all(np.abs(after[changed]) == np.abs(before[changed]) - 1)
    assert np.all(np.sign(after) * np.sign(before) >= 0)
    assert report.shrinkage_events == np.count_nonzero((before != 0) & (after == 0))
    assert report.achieved_rate == pytest.approx(len(message) / nonzero_ac_count(plane))


def test_shrinkage_is_reembedded():
    plane = DctPlane(np.zeros((2, 2, 8, 8)), 80, 16, 16)
    plane = plane.with_ac(np.tile([1, 2], 126))
    message = np.zeros(16, dtype=np.uint8)
    key = StegoKey(5)
    stego, report = f5_embed(plane, message, key, 1)
    assert report.shrinkage_events > 0
    assert np.array_equal(f5_extract(stego, key, 16, 1), message)


def test_empty_message():
    plane = random_plane(6)
    stego, report = f5_embed(plane, [], StegoKey(1), 3)
    assert stego == plane
    assert report.coefficients_changed == 0
    assert report.bits_embedded == 0
    assert f5_extract(plane, StegoKey(1), 0, 3).size == 0


def test_wrong_key():
    plane = random_plane(7)
    message = random_bits(7, 256)
    stego, _ = f5_embed(plane, message, StegoKey(1), 2)
    assert not np.array_equal(f5_extract(stego, StegoKey(2), 256, 2), message)


def test_extract_unembedded():
    bits = f5_extract(random_plane(8), StegoKey(1), 500, 1)
    assert bits.shape == (500,)
    assert 150 < bits.sum() < 350


def test_choose_p():
    plane = random_plane(9)
    assert choose_f5_p(plane, 0) == 1
    n_bits = capacity(plane, 0.1)
    p = choose_f5_p(plane, n_bits)
    assert expected_capacity(plane, p) >= n_bits
    assert expected_capacity(plane, p + 1) < n_bits or p == 16
    with pytest.raises(CapacityExceeded):
        choose_f5_p(plane, 10 * nonzero_ac_count(plane))
    with pytest.raises(CapacityExceeded):
        f5_extract(plane, StegoKey(1), 10 * nonzero_ac_count(plane), 1)
