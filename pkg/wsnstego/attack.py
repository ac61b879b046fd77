# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Steganographic attack on a sensor snapshot.

The attacker renders the snapshot the way the sink will see it, embeds in that
image, and turns the changed pixels into edits of the sensors behind them. For
the JPEG-domain algorithms every 8x8 block holding a changed coefficient is
replaced by its decompression from the stego plane; the other blocks keep the
cover's pixels. When the sink compresses the attacked rendering at the same
quality it gets back the stego plane, so the only coefficients that differ from
the cover's are the ones the embedding changed.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .dct import BLOCK, capacity, forward, inverse
from .field import Snapshot, apply_attack
from .imageio import GrayImage, SensorDelta, gray_delta_to_sensor_deltas, render_gray
from .stego import (CapacityExceeded, EmbedReport, attack_map, choose_f5_p, f5_embed,
                    lsb_replace_embed, lsb_report, nsf5_embed, random_message)
from .utils import as_bits


@dataclass(frozen=True)
class AttackSettings(object):
    algorithm: str = "nsf5"
    rate: float = 0.1
    quality: int = 80
    block_size: int = 128
    f5_p: int = 0

    @classmethod
    def from_config(cls, config):
        return cls(config.algorithm, config.rate, config.quality, config.block_size, config.f5_p)


@dataclass(frozen=True, eq=False)
class AttackResult(object):
    snapshot: Snapshot        # attacked readings
    report: EmbedReport
    deltas: List[SensorDelta]
    cover_gray: GrayImage
    stego_gray: GrayImage     # what the sink renders from the attacked readings


def _carriers(settings, cover_gray, cover_plane):
    if settings.algorithm == "lsb":
        return cover_gray.pixels.size
    return int(np.count_nonzero(cover_plane.ac_coefficients()))


def _message_bits(settings, cover_gray, cover_plane):
    if settings.algorithm == "lsb":
        return int(np.floor(settings.rate * cover_gray.pixels.size + 1e-9))
    return capacity(cover_plane, settings.rate)


def replace_changed_blocks(cover_gray, cover_plane, stego_plane):
    """The cover with every block the embedding touched decompressed from `stego_plane`."""
    changed = (cover_plane.coeffs != stego_plane.coeffs).any(axis=(2, 3))
    mask = changed.repeat(BLOCK, axis=0).repeat(BLOCK, axis=1)
    mask = mask[:cover_gray.pixels.shape[0], :cover_gray.pixels.shape[1]]
    return GrayImage(np.where(mask, inverse(stego_plane).pixels, cover_gray.pixels))


def embed_gray(cover_gray, settings, key, message_key, message=None):
    """Target gray image and report for embedding into `cover_gray`.

    :param message: bits to embed; None draws a keyed random message from
                    `message_key` that fills `settings.rate`
    """
    cover_plane = forward(cover_gray, settings.quality)
    n_bits = _message_bits(settings, cover_gray, cover_plane)
    if message is None:
        message = random_message(message_key, n_bits)
    else:
        message = as_bits(message)
        if len(message) > n_bits:
            raise CapacityExceeded(f"{len(message)} message bits exceed the {n_bits} that fit "
                                   f"at rate {settings.rate}")
    if len(message) == 0:
        return cover_gray, EmbedReport.identity(settings.algorithm,
                                                _carriers(settings, cover_gray, cover_plane))
    if settings.algorithm == "lsb":
        stego = lsb_replace_embed(cover_gray, message, key)
        return stego, lsb_report(cover_gray, stego, len(message))

    if settings.algorithm == "nsf5":
        stego_plane, report = nsf5_embed(cover_plane, message, key, settings.rate,
                                         settings.block_size)
    elif settings.algorithm == "f5":
        p = settings.f5_p or choose_f5_p(cover_plane, len(message))
        stego_plane, report = f5_embed(cover_plane, message, key, p)
    else:
        raise ValueError(f"unknown algorithm {settings.algorithm!r}")
    report.extra["coefficient_map_size"] = len(attack_map(cover_plane, stego_plane))
    return replace_changed_blocks(cover_gray, cover_plane, stego_plane), report


def attack_snapshot(snapshot, field, settings, key, message_key, message=None):
    """Embed a message at `settings.rate` into the snapshot's readings.

    :param key: StegoKey shared with the receiver
    :param message_key: StegoKey the random message bits are drawn from
    :param message: bits to embed instead of a random message
    """
    cover_gray = render_gray(snapshot, field)
    target, report = embed_gray(cover_gray, settings, key, message_key, message)
    deltas = gray_delta_to_sensor_deltas(cover_gray, target, field, snapshot)
    attacked = apply_attack(snapshot, deltas)
    sink_gray = render_gray(attacked, field)
    report.extra["sensors_changed"] = len(deltas)
    report.extra["pixels_changed"] = int(np.count_nonzero(sink_gray.pixels != cover_gray.pixels))
    report.extra["pixels_missed"] = int(np.count_nonzero(sink_gray.pixels != target.pixels))
    return AttackResult(attacked, report, deltas, cover_gray, sink_gray)
