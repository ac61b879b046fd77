# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Portable keyed pseudorandom numbers.

Every random draw in wsnstego (sensor noise, zone centres, stego keys, bootstrap
samples, random subspaces) comes from SplitMix64 used in counter mode:

    word(state, i) = mix64(state + (i + 1) * 0x9E3779B97F4A7C15  mod 2**64)

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

which is exactly the SplitMix64 output sequence seeded with `state`. Seeds for
sub-streams are derived by folding integer tags through `mix64` (`derive_seed`).
Uniform doubles use the top 53 bits of a word; normals use Box-Muller on two
consecutive words. Because word `i` only depends on (state, i), any single draw
can be reproduced in isolation and draws can be computed in any order.
"""

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO_POW_53 = float(2 ** 53)


def mix64(z):
    """SplitMix64 finaliser on a python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z):
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


def derive_seed(seed, *tags):
    """Derive an independent 64-bit seed from `seed` and integer tags.

    >>> derive_seed(1, 2) == derive_seed(1, 2)
    True
    >>> derive_seed(1, 2) != derive_seed(1, 3)
    True
    """
    z = mix64(int(seed) & MASK64)
    for tag in tags:
        z = mix64((z + GOLDEN_GAMMA * ((int(tag) & MASK64) + 1)) & MASK64)
    return z


def words_at(state, counters):
    """SplitMix64 output words for `counters` (any integer array) of a stream."""
    counters = np.asarray(counters).astype(np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(int(state) & MASK64) + (counters + np.uint64(1)) * np.uint64(GOLDEN_GAMMA)
    return mix64_array(z)


def uniform_from_words(words):
    return (np.asarray(words, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) / _TWO_POW_53


def standard_normal_at(state, counters):
    """Index-addressable N(0, 1) draws: draw `i` uses words 2i and 2i+1."""
    counters = np.asarray(counters).astype(np.uint64)
    u1 = uniform_from_words(words_at(state, counters * np.uint64(2)))
    u2 = uniform_from_words(words_at(state, counters * np.uint64(2) + np.uint64(1)))
    # 1 - u1 is in (0, 1], so the log is finite
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


class KeyedStream(object):
    """Sequential view of a counter-based SplitMix64 stream.

    Each call consumes as many counters as values it returns, so the same
    sequence of calls on a stream with the same seed returns the same values.
    """

    def __init__(self, seed, *tags):
        self.state = derive_seed(seed, *tags)
        self.position = 0

    def words(self, n):
        counters = np.arange(self.position, self.position + n, dtype=np.uint64)
        self.position += n
        return words_at(self.state, counters)

    def uniform(self, n):
        return uniform_from_words(self.words(n))

    def integers(self, n, high):
        """`n` integers uniform on [0, high)."""
        if high < 1:
            raise ValueError("high must be at least 1")
        return np.floor(self.uniform(n) * high).astype(np.int64)

    def bits(self, n):
        return (self.words(n) >> np.uint64(63)).astype(np.uint8)

    def normal(self, n):
        u1 = self.uniform(n)
        u2 = self.uniform(n)
        return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)

    def permutation(self, n):
        """A keyed permutation of range(n), by sorting random words."""
        return np.argsort(self.words(n), kind="stable")
