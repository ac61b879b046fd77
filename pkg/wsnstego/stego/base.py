# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from dataclasses import dataclass, field, asdict
from typing import NamedTuple, Tuple
import json

import numpy as np

from ..dct import GeometryError
from ..prng import KeyedStream, MASK64
from ..utils import makedirs_for

# stream tags, one per keyed use of a StegoKey
F5_STREAM = 0xF5
NSF5_STREAM = 0x5F
LSB_STREAM = 0x1B
MESSAGE_STREAM = 0x3E


class StegoError(Exception):
    pass


class CapacityExceeded(StegoError):
    pass


class Unsolvable(StegoError):
    pass


class StegoKey(NamedTuple):
    """64-bit secret shared by embedder and extractor."""
    seed: int

    @classmethod
    def from_int(cls, value):
        return cls(int(value) & MASK64)

    def stream(self, *tags):
        return KeyedStream(self.seed, *tags)


def f5_lsb(c):
    """F5's LSB: `c mod 2` for c >= 0, `(1 - c) mod 2` for c < 0.

    Decreasing a magnitude flips it, except for the shrinkage -1 -> 0 which keeps it
    at 0. Magnitudes of two or more always flip.

    >>> [int(f5_lsb(c)) for c in (3, -1, -2, 0)]
    [1, 0, 1, 0]
    """
    c = np.asarray(c, dtype=np.int64)
    return np.where(c < 0, (1 - c) % 2, c % 2).astype(np.uint8)


def random_message(key, n_bits):
    """`n_bits` keyed message bits."""
    return key.stream(MESSAGE_STREAM).bits(int(n_bits))


@dataclass
class EmbedReport(object):
    algorithm: str
    bits_embedded: int = 0
    coefficients_changed: int = 0
    shrinkage_events: int = 0
    carriers: int = 0             # nonzero AC coefficients (pixels for lsb)
    achieved_rate: float = 0.0
    extra: dict = field(default_factory=dict)

    @classmethod
    def identity(cls, algorithm, carriers):
        return cls(algorithm=algorithm, carriers=int(carriers))

    def to_dict(self):
        record = asdict(self)
        record.update(record.pop("extra"))
        return record

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def append_jsonl(self, path, **context):
        makedirs_for(path)
        record = dict(self.to_dict(), **context)
        with open(path, "a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def achieved_rate(bits, carriers):
    return float(bits) / carriers if carriers else 0.0


class AttackMapEntry(NamedTuple):
    block: Tuple[int, int]
    i: int
    j: int
    old: int
    new: int


def attack_map(before, after):
    """Every coefficient that differs between two planes of the same geometry."""
    if not before.same_geometry(after):
        raise GeometryError("planes have different geometry")
    changed = np.nonzero(before.coeffs != after.coeffs)
    return [AttackMapEntry((int(r), int(c)), int(i), int(j),
                           int(before.coeffs[r, c, i, j]), int(after.coeffs[r, c, i, j]))
            for r, c, i, j in zip(*changed)]
