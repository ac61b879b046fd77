# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""nsF5: F5 without shrinkage, using wet paper codes.

Carriers are the nonzero AC coefficients in keyed order. They are split into blocks;
block `b` carries `k_b` message bits as the syndrome D_b.lsb, where D_b is a keyed
random matrix with distinct nonzero columns. Coefficients of magnitude one are wet
(decrementing them would create a zero the receiver can't see) and never change;
the rest are dry. Every change decrements a magnitude, so the set of nonzero
coefficients, and with it the receiver's carrier order, is preserved.

Blocks of up to MAX_SEARCH_BITS bits are solved with the fewest changes, longer
ones by Gaussian elimination. A block whose syndrome is out of reach of its dry
columns raises `Unsolvable`: the receiver couldn't follow a change of block
parameters, so there is nothing to retry with.
"""

from typing import NamedTuple

import numpy as np

from ..dct import capacity, nonzero_ac_count
from ..utils import as_bits, round_half_away
from .base import (CapacityExceeded, EmbedReport, NSF5_STREAM, Unsolvable, achieved_rate,
                   f5_lsb)
from .wetpaper import (MAX_SEARCH_BITS, WetPaperSystem, gf2_matvec, min_weight_solve,
                       random_columns, wet_paper_solve)

DEFAULT_BLOCK_SIZE = 128
# lower bound on k
MIN_BLOCK_BITS = 8


class BlockPlan(NamedTuple):
    start: int       # offset into the keyed carrier order
    size: int        # carriers in the block
    msg_start: int   # offset into the message
    msg_bits: int    # k_b


def _check_rate(rate):
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")


def _split(total, parts):
    """Sizes of `total` split into `parts` near-equal chunks, larger ones first."""
    return [len(chunk) for chunk in np.array_split(np.arange(total), parts)]


def block_plan(n_carriers, n_bits, rate, block_size=DEFAULT_BLOCK_SIZE):
    """Blocks of carriers and the message bits each one holds.

    The message is split evenly between ceil(M / k) blocks, where
    k = max(MIN_BLOCK_BITS, round(rate * block_size)), and every carrier is dealt out
    evenly between them. A block of k_b bits holds at most 2**k_b - 1 carriers, the
    number of distinct nonzero columns of D, and needs more carriers than bits.
    """
    _check_rate(rate)
    if block_size < 1:
        raise ValueError("block_size must be positive")
    if n_bits == 0:
        return []
    k = max(MIN_BLOCK_BITS, int(round_half_away(rate * block_size)))
    n_blocks = -(-n_bits // k)
    plan = []
    start = msg_start = 0
    for size, k_b in zip(_split(n_carriers, n_blocks), _split(n_bits, n_blocks)):
        size = min(size, 2 ** k_b - 1)
        # a square D is singular too often, except the 1 x 1 one
        if size < k_b or size == k_b > 1:
            raise CapacityExceeded(f"block of {size} carriers can't hold {k_b} bits")
        plan.append(BlockPlan(start, size, msg_start, k_b))
        start += size
        msg_start += k_b
    return plan


def dry_count(plane):
    """AC coefficients nsF5 may change: those of magnitude two or more."""
    return int(np.count_nonzero(np.abs(plane.ac_coefficients()) >= 2))


def _carrier_order(ac, key):
    order = key.stream(NSF5_STREAM).permutation(ac.size)
    return order[ac[order] != 0]


def _block_matrix(key, block, plan):
    return random_columns(key.stream(NSF5_STREAM, block + 1), plan.msg_bits, plan.size)


def _solve(system, delta):
    if system.k <= MAX_SEARCH_BITS:
        return min_weight_solve(system, delta)
    return wet_paper_solve(system, delta)


def nsf5_embed(plane, message, key, rate, block_size=DEFAULT_BLOCK_SIZE):
    _check_rate(rate)
    bits = as_bits(message)
    carriers = nonzero_ac_count(plane)
    dry = dry_count(plane)
    report = EmbedReport.identity("nsf5", carriers)
    report.extra.update(dry_carriers=dry)
    if len(bits) == 0:
        return plane, report
    if len(bits) > capacity(plane, rate):
        raise CapacityExceeded(f"{len(bits)} bits exceed the capacity {capacity(plane, rate)} "
                               f"of {carriers} nonzero AC coefficients at rate {rate}")
    if len(bits) >= dry:
        raise CapacityExceeded(f"{len(bits)} bits don't fit in the {dry} coefficients "
                               f"that can change without shrinkage")

    ac = plane.ac_coefficients().astype(np.int64)
    order = _carrier_order(ac, key)
    for b, block in enumerate(block_plan(len(order), len(bits), rate, block_size)):
        idx = order[block.start:block.start + block.size]
        c = ac[idx]
        D = _block_matrix(key, b, block)
        m = bits[block.msg_start:block.msg_start + block.msg_bits]
        delta = m ^ gf2_matvec(D, f5_lsb(c))
        try:
            v = _solve(WetPaperSystem(D, np.abs(c) >= 2), delta)
        except Unsolvable as exc:
            raise Unsolvable(f"block {b}: {exc}") from exc
        change = v.astype(bool)
        c[change] -= np.sign(c[change])
        ac[idx] = c
        report.coefficients_changed += int(np.count_nonzero(change))

    report.bits_embedded = len(bits)
    report.achieved_rate = achieved_rate(len(bits), carriers)
    return plane.with_ac(ac), report


def nsf5_extract(plane, key, length, rate, block_size=DEFAULT_BLOCK_SIZE):
    """Recompute D_b.lsb for every block; needs no wet/dry knowledge."""
    _check_rate(rate)
    if length == 0:
        return np.zeros(0, dtype=np.uint8)
    ac = plane.ac_coefficients().astype(np.int64)
    order = _carrier_order(ac, key)
    plan = block_plan(len(order), int(length), rate, block_size)
    message = np.zeros(int(length), dtype=np.uint8)
    for b, block in enumerate(plan):
        c = ac[order[block.start:block.start + block.size]]
        if len(c) < block.size:
            raise CapacityExceeded(f"{length} bits need more than {len(order)} carriers")
        message[block.msg_start:block.msg_start + block.msg_bits] = \
            gf2_matvec(_block_matrix(key, b, block), f5_lsb(c))
    return message
