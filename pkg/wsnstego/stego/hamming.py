# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Binary Hamming codes for matrix embedding.

Column `j` (1-based) of H is the binary expansion of `j`, most significant bit in
row 0, so the syndrome of a word is the XOR of the (1-based) indices of its set
bits, and the column to flip for a syndrome difference `d` is column `d` itself.
"""

from functools import lru_cache

import numpy as np

from ..utils import as_bits


class HammingCode(object):
    def __init__(self, p):
        if int(p) != p or p < 1:
            raise ValueError(f"p must be a positive integer, got {p}")
        self.p = int(p)
        self.n = 2 ** self.p - 1
        shifts = np.arange(self.p - 1, -1, -1)
        H = (np.arange(1, self.n + 1)[np.newaxis, :] >> shifts[:, np.newaxis]) & 1
        self.H = H.astype(np.uint8)
        self.H.setflags(write=False)
        self._weights = 1 << shifts

    def __repr__(self):
        return f"HammingCode(p={self.p})"

    @property
    def efficiency(self):
        """Expected bits embedded per change, p / (1 - 2**-p)."""
        return self.p / (1.0 - 2.0 ** -self.p)

    @property
    def expected_changes(self):
        """Expected changes per group for uniform cover and message."""
        return 1.0 - 2.0 ** -self.p

    def syndrome(self, x):
        """H.x over GF(2); `x` may be a batch of words along the last axis."""
        x = np.asarray(x, dtype=np.int64)
        return ((x @ self.H.T.astype(np.int64)) % 2).astype(np.uint8)

    def to_int(self, bits):
        return int(np.asarray(bits, dtype=np.int64) @ self._weights)

    def flip_index(self, x, m):
        """0-based position to flip so the syndrome becomes `m`, or -1 if none."""
        delta = self.to_int(self.syndrome(x)) ^ self.to_int(m)
        return delta - 1


@lru_cache(maxsize=None)
def hamming_code(p):
    return HammingCode(p)


def hamming_embed(x, m, code):
    """Word `y` with H.y = m that differs from `x` in at most one position."""
    x = as_bits(x)
    m = as_bits(m)
    if len(x) != code.n or len(m) != code.p:
        raise ValueError(f"{code} needs {code.n} cover bits and {code.p} message bits, "
                         f"got {len(x)} and {len(m)}")
    y = x.copy()
    j = code.flip_index(x, m)
    if j >= 0:
        y[j] ^= 1
    return y
