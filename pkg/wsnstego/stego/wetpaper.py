# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Wet paper codes: syndrome coding where only "dry" carriers may change.

The receiver only computes D.y; it never needs to know which carriers were dry.
The sender solves D.v = delta over GF(2) with v supported on the dry carriers, by
Gaussian elimination, or for short syndromes by a search for the solution with
the fewest changes.
"""

from dataclasses import dataclass

import numpy as np

from .base import Unsolvable


def gf2_matvec(D, v):
    return ((np.asarray(D, dtype=np.int64) @ np.asarray(v, dtype=np.int64)) % 2).astype(np.uint8)


def random_columns(stream, k, n):
    """A k x n binary matrix with distinct nonzero columns drawn from `stream`.

    Offending columns are redrawn, in column order, until none are left.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if n > 2 ** k - 1:
        raise ValueError(f"only {2 ** k - 1} distinct nonzero columns of height {k}, {n} asked")
    if n == 0:
        return np.zeros((k, 0), dtype=np.uint8)
    cols = stream.bits(n * k).reshape(n, k)
    while True:
        zero = ~cols.any(axis=1)
        _, first = np.unique(np.packbits(cols, axis=1), axis=0, return_index=True)
        duplicate = np.ones(n, dtype=bool)
        duplicate[first] = False
        bad = np.flatnonzero(zero | duplicate)
        if len(bad) == 0:
            return np.ascontiguousarray(cols.T)
        cols[bad] = stream.bits(len(bad) * k).reshape(len(bad), k)


@dataclass(frozen=True, eq=False)
class WetPaperSystem(object):
    D: np.ndarray    # (k, n) binary
    dry: np.ndarray  # (n,) bool, carriers the sender may change

    def __post_init__(self):
        D = np.asarray(self.D, dtype=np.uint8)
        dry = np.asarray(self.dry, dtype=bool)
        if D.ndim != 2 or dry.shape != (D.shape[1],):
            raise ValueError(f"D of shape {D.shape} doesn't match a dry mask of shape {dry.shape}")
        if D.size and D.max() > 1:
            raise ValueError("D must be binary")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "dry", dry)

    @property
    def k(self):
        return self.D.shape[0]

    @property
    def n(self):
        return self.D.shape[1]

    @property
    def dry_indices(self):
        return np.flatnonzero(self.dry)

    @property
    def wet_count(self):
        return self.n - int(np.count_nonzero(self.dry))

    def validate(self):
        if not self.D.any(axis=0).all():
            raise ValueError("D has a zero column")
        if len(np.unique(self.D.T, axis=0)) != self.n:
            raise ValueError("D has duplicate columns")
        return self


def gf2_solve(A, b):
    """One solution x of A.x = b over GF(2) (free variables set to 0), or None."""
    A = np.asarray(A, dtype=np.uint8) % 2
    rows, cols = A.shape
    aug = np.concatenate([A, np.asarray(b, dtype=np.uint8).reshape(rows, 1) % 2], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(aug[r:, c]) + r
        if len(candidates) == 0:
            continue
        p = candidates[0]
        if p != r:
            aug[[r, p]] = aug[[p, r]]
        # reduced echelon form: clear the column above and below the pivot
        others = np.flatnonzero(aug[:, c])
        others = others[others != r]
        aug[others] ^= aug[r]
        pivots.append(c)
        r += 1
    if aug[r:, -1].any():
        return None
    x = np.zeros(cols, dtype=np.uint8)
    x[pivots] = aug[:len(pivots), -1]
    return x


def wet_paper_solve(system, delta, check=__debug__):
    """Change vector v with D.v = delta and support only on dry carriers.

    Raises `Unsolvable` when delta isn't in the span of the dry columns.
    """
    delta = np.asarray(delta, dtype=np.uint8)
    if delta.shape != (system.k,):
        raise ValueError(f"delta needs {system.k} bits, got shape {delta.shape}")
    dry = system.dry_indices
    v = np.zeros(system.n, dtype=np.uint8)
    if not delta.any():
        return v
    solution = gf2_solve(system.D[:, dry], delta)
    if solution is None:
        raise Unsolvable(f"syndrome not reachable with {len(dry)} dry of {system.n} carriers")
    v[dry] = solution
    if check:
        assert np.array_equal(gf2_matvec(system.D, v), delta), "wet paper solution fails D.v = delta"
    return v


MAX_SEARCH_BITS = 16


def min_weight_solve(system, delta, check=__debug__):
    """Like `wet_paper_solve`, but with the fewest possible changes.

    Breadth-first search over the 2**k syndromes, one dry column per step, so the
    first time `delta` is reached it is by a minimal set of columns. Only for
    k <= MAX_SEARCH_BITS.
    """
    delta = np.asarray(delta, dtype=np.uint8)
    if delta.shape != (system.k,):
        raise ValueError(f"delta needs {system.k} bits, got shape {delta.shape}")
    if system.k > MAX_SEARCH_BITS:
        raise ValueError(f"search is limited to {MAX_SEARCH_BITS} bits, got {system.k}")
    dry = system.dry_indices
    weights = 1 << np.arange(system.k, dtype=np.int64)
    columns = weights @ system.D[:, dry].astype(np.int64)
    target = int(weights @ delta.astype(np.int64))

    parent = np.full(1 << system.k, -1, dtype=np.int64)
    seen = np.zeros(1 << system.k, dtype=bool)
    seen[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    while not seen[target]:
        if frontier.size == 0 or columns.size == 0:
            raise Unsolvable(f"syndrome not reachable with {len(dry)} dry of {system.n} carriers")
        reached = (frontier[:, np.newaxis] ^ columns[np.newaxis, :]).ravel()
        via = np.tile(np.arange(len(columns)), len(frontier))
        fresh = ~seen[reached]
        reached = reached[fresh]
        # any column that reaches a syndrome from the previous layer will do
        parent[reached] = via[fresh]
        layer = np.zeros_like(seen)
        layer[reached] = True
        seen |= layer
        frontier = np.flatnonzero(layer)

    v = np.zeros(system.n, dtype=np.uint8)
    syndrome = target
    while syndrome:
        j = parent[syndrome]
        v[dry[j]] = 1
        syndrome ^= int(columns[j])
    if check:
        assert np.array_equal(gf2_matvec(system.D, v), delta), "wet paper solution fails D.v = delta"
    return v
