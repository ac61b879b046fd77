# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Spatial LSB replacement over a keyed subset of pixels."""

import numpy as np

from ..imageio import GrayImage
from ..utils import as_bits
from .base import CapacityExceeded, EmbedReport, LSB_STREAM, achieved_rate


def _pixel_order(n_pixels, key, length):
    return key.stream(LSB_STREAM).permutation(n_pixels)[:length]


def lsb_replace_embed(image, message, key):
    bits = as_bits(message)
    pixels = image.pixels.ravel().copy()
    if len(bits) > pixels.size:
        raise CapacityExceeded(f"{len(bits)} bits don't fit in {pixels.size} pixels")
    if len(bits) == 0:
        return image
    where = _pixel_order(pixels.size, key, len(bits))
    pixels[where] = (pixels[where] & 0xFE) | bits
    return GrayImage(pixels.reshape(image.shape))


def lsb_replace_extract(image, key, length):
    pixels = image.pixels.ravel()
    if length > pixels.size:
        raise CapacityExceeded(f"{length} bits asked from {pixels.size} pixels")
    return (pixels[_pixel_order(pixels.size, key, int(length))] & 1).astype(np.uint8)


def lsb_report(cover, stego, n_bits):
    report = EmbedReport.identity("lsb", cover.pixels.size)
    report.bits_embedded = int(n_bits)
    report.coefficients_changed = int(np.count_nonzero(cover.pixels != stego.pixels))
    report.achieved_rate = achieved_rate(n_bits, cover.pixels.size)
    return report
