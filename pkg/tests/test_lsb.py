from wsnstego.stego import *

from .utils import *

import numpy as np
import pytest


def test_roundtrip():
    image = random_gray(1, shape=(32, 32))
    for n_bits in (1, 100, 1024):
        message = random_bits(n_bits, n_bits)
        stego = lsb_replace_embed(image, message, StegoKey(9))
        assert np.array_equal(lsb_replace_extract(stego, StegoKey(9), n_bits), message)
        assert np.all(np.abs(stego.pixels.astype(int) - image.pixels.astype(int)) <= 1)


def test_empty_message():
    image = random_gray(2)
    assert lsb_replace_embed(image, [], StegoKey(1)) == image
    assert lsb_replace_extract(image, StegoKey(1), 0).size == 0


def test_full_capacity_flips_half():
    image = random_gray(3, shape=(64, 64))
    message = random_message(StegoKey(4), image.pixels.size)
    stego = lsb_replace_embed(image, message, StegoKey(5))
    changed = np.mean(stego.pixels != image.pixels)
    assert 0.45 < changed < 0.55

    report = lsb_report(image, stego, len(message))
    assert report.algorithm == "lsb"
    assert report.coefficients_changed == np.count_nonzero(stego.pixels != image.pixels)
    assert report.achieved_rate == 1.0


def test_capacity():
    image = random_gray(6, shape=(4, 4))
    with pytest.raises(CapacityExceeded):
        lsb_replace_embed(image, np.zeros(17), StegoKey(1))
    with pytest.raises(CapacityExceeded):
        lsb_replace_extract(image, StegoKey(1), 17)


def test_keyed_positions():
    image = random_gray(7, shape=(32, 32))
    message = random_bits(7, 300)
    stego = lsb_replace_embed(image, message, StegoKey(1))
    assert not np.array_equal(lsb_replace_extract(stego, StegoKey(2), 300), message)
