# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""F5: matrix embedding over nonzero AC coefficients, with shrinkage."""

import numpy as np

from ..dct import nonzero_ac_count
from ..utils import as_bits
from .base import (CapacityExceeded, EmbedReport, F5_STREAM, achieved_rate, f5_lsb)
from .hamming import hamming_code

MAX_P = 16


def _keyed_order(n_ac, key):
    return key.stream(F5_STREAM).permutation(n_ac)


def expected_capacity(plane, p):
    """Bits F5 can expect to embed with code parameter `p`.

    Coefficients of magnitude one shrink to zero about half the time they're changed
    and are then lost; the usual estimate keeps 49% of them.
    """
    ac = np.abs(plane.ac_coefficients())
    usable = np.count_nonzero(ac > 1) + 0.49 * np.count_nonzero(ac == 1)
    return int(usable // (2 ** p - 1)) * p


def choose_f5_p(plane, message_length):
    """Largest code parameter whose expected capacity still holds the message."""
    if message_length == 0:
        return 1
    best = None
    for p in range(1, MAX_P + 1):
        if expected_capacity(plane, p) >= message_length:
            best = p
    if best is None:
        raise CapacityExceeded(f"{message_length} bits don't fit even at p=1 "
                               f"(expected capacity {expected_capacity(plane, 1)})")
    return best


class _CarrierWalk(object):
    """Keyed walk over AC positions that skips zero coefficients."""

    def __init__(self, ac, order):
        self.ac = ac
        self.order = order
        self.pos = 0

    def next(self):
        while self.pos < len(self.order):
            idx = self.order[self.pos]
            self.pos += 1
            if self.ac[idx] != 0:
                return idx
        raise CapacityExceeded("ran out of nonzero coefficients")


def f5_embed(plane, message, key, p):
    """Embed `message` with F5 and code parameter `p`.

    Groups of 2**p - 1 nonzero coefficients carry p bits each. A change always
    decrements a magnitude; when that makes a coefficient zero the extractor will skip
    it, so it is dropped from the group, the group is refilled with the next carrier
    and the same bits are embedded again.
    """
    bits = as_bits(message)
    carriers = nonzero_ac_count(plane)
    report = EmbedReport.identity("f5", carriers)
    report.extra["p"] = int(p)
    if len(bits) == 0:
        return plane, report

    code = hamming_code(p)
    ac = plane.ac_coefficients().astype(np.int64)
    walk = _CarrierWalk(ac, _keyed_order(ac.size, key))
    group = []
    for start in range(0, len(bits), code.p):
        chunk = bits[start:start + code.p]
        while True:
            while len(group) < code.n:
                group.append(walk.next())
            lsb = f5_lsb(ac[group])
            target = code.syndrome(lsb)
            # a short final chunk keeps the group's own syndrome in the unused rows
            target[:len(chunk)] = chunk
            j = code.flip_index(lsb, target)
            if j < 0:
                break
            idx = group[j]
            ac[idx] -= np.sign(ac[idx])
            report.coefficients_changed += 1
            if ac[idx] != 0:
                break
            report.shrinkage_events += 1
            del group[j]
        group = []

    report.bits_embedded = len(bits)
    report.achieved_rate = achieved_rate(len(bits), carriers)
    return plane.with_ac(ac), report


def f5_extract(plane, key, length, p):
    if length == 0:
        return np.zeros(0, dtype=np.uint8)
    code = hamming_code(p)
    ac = plane.ac_coefficients().astype(np.int64)
    walk = ac[_keyed_order(ac.size, key)]
    walk = walk[walk != 0]
    n_groups = -(-int(length) // code.p)
    if n_groups * code.n > len(walk):
        raise CapacityExceeded(f"{length} bits need {n_groups} groups of {code.n} "
                               f"coefficients, only {len(walk)} nonzero coefficients")
    lsb = f5_lsb(walk[:n_groups * code.n]).reshape(n_groups, code.n)
    return code.syndrome(lsb).ravel()[:length]
