# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Classic LSB-replacement steganalysis on gray images.

Gray values 2k and 2k+1 form a close pair: they differ only in the LSB. LSB
replacement with random bits drives the two counts of every pair towards their
average, which is what these detectors look for.
"""

import numpy as np

from ..imageio import GrayImage
from ..stego import lsb_replace_embed, random_message

MIN_TEST_FRACTION = 0.01


def _pair_counts(image):
    counts = np.bincount(image.pixels.ravel(), minlength=256)
    return counts.reshape(128, 2)


def close_color_pairs_stat(image):
    """Mean over occupied pairs (2k, 2k+1) of |n(2k) - n(2k+1)| / (n(2k) + n(2k+1)).

    1 for images using only one value of every pair; near 0 after LSB replacement.
    """
    if image.pixels.size == 0:
        raise ValueError("empty image")
    pairs = _pair_counts(image).astype(float)
    total = pairs.sum(axis=1)
    occupied = total > 0
    return float(np.mean(np.abs(pairs[occupied, 0] - pairs[occupied, 1]) / total[occupied]))


def close_pairs_score(image):
    """Higher is more suspect."""
    return 1.0 - close_color_pairs_stat(image)


def rqp_test(image, key, test_fraction=0.5):
    """Ratio of the close pair statistic after and before embedding a test message.

    The test message covers `test_fraction` of the pixels and is embedded with
    `lsb_replace_embed` under `key`. A ratio near 1 means the image barely reacted,
    as an image already full of random LSBs does.
    """
    if test_fraction < MIN_TEST_FRACTION or test_fraction > 1:
        raise ValueError(f"test message must cover between {MIN_TEST_FRACTION:.0%} and 100% "
                         f"of the pixels, got {test_fraction}")
    n_bits = max(1, int(round(test_fraction * image.pixels.size)))
    before = close_color_pairs_stat(image)
    after = close_color_pairs_stat(lsb_replace_embed(image, random_message(key, n_bits), key))
    if before == 0:
        return 1.0
    return after / before


def rqp_score(image, key, test_fraction=0.5):
    """Higher is more suspect: -|1 - ratio|."""
    return -abs(1.0 - rqp_test(image, key, test_fraction))


def lsb_enhance(image):
    """The LSB plane stretched to black and white, for visual inspection."""
    return GrayImage(((image.pixels & 1) * 255).astype(np.uint8))


def lsb_plane_entropy(image):
    """Shannon entropy of the LSB plane, in bits per pixel."""
    if image.pixels.size == 0:
        raise ValueError("empty image")
    p = float(np.mean(image.pixels & 1))
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))
