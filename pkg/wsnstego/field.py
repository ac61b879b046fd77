# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Synthetic wireless sensor field and its timestamped snapshots.

A field is a `side_length` x `side_length` grid of sensors. Each sensor senses one
modality and belongs to one homogeneous zone. Zones are built around "remarkable
locations" (zone centres); at tick `t` every sensor of a zone reads

    Normal(base_mean * (1 + rate * (t / 4) * r), std_dev)

where `rate` is the drift rate of the zone's modality and `r = sqrt(x**2 + y**2)` is
the radius of the zone centre, with grid coordinates normalised to [0, 1].

Arrays are indexed `[y, x]`; positions are `(x, y)` tuples.
"""

from dataclasses import dataclass, replace
from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .prng import KeyedStream, derive_seed, standard_normal_at

# stream tags
FIELD_STREAM = 0x46
NOISE_STREAM = 0x4E


class FieldConfigError(ValueError):
    pass


class AttackError(IndexError):
    pass


class Modality(IntEnum):
    TEMPERATURE = 0
    PRESSURE = 1
    HUMIDITY = 2

    @property
    def label(self):
        return self.name.lower()

    @classmethod
    def from_label(cls, label):
        return cls[label.strip().upper()]


@dataclass(frozen=True)
class FieldConfig(object):
    side_length: int = 256
    zone_counts: Tuple[int, int, int] = (50, 40, 10)
    modality_fractions: Tuple[float, float, float] = (0.5, 0.4, 0.1)
    drift_rates: Tuple[float, float, float] = (0.005, 0.01, 0.001)
    base_mean: float = 40.0
    std_dev: float = 5.0
    seed: int = 1

    def validate(self):
        if self.side_length < 8:
            raise FieldConfigError(f"side_length must be at least 8 (one DCT block), got {self.side_length}")
        if len(self.zone_counts) != 3 or len(self.modality_fractions) != 3 or len(self.drift_rates) != 3:
            raise FieldConfigError("zone_counts, modality_fractions and drift_rates need one value per modality")
        if any(int(z) < 1 for z in self.zone_counts):
            raise FieldConfigError(f"zone counts must be positive, got {self.zone_counts}")
        if any(f < 0 for f in self.modality_fractions) or \
                not np.isclose(sum(self.modality_fractions), 1.0):
            raise FieldConfigError(f"modality fractions must sum to 1, got {self.modality_fractions}")
        if self.std_dev < 0:
            raise FieldConfigError("std_dev must be non-negative")
        targets = modality_targets(self.n_sensors, self.modality_fractions)
        for modality, (zones, target) in enumerate(zip(self.zone_counts, targets)):
            if zones > target:
                raise FieldConfigError(
                    f"{Modality(modality).label}: {zones} zones but only {target} sensors")
        return self

    @property
    def n_sensors(self):
        return self.side_length * self.side_length

    def with_seed(self, seed):
        return replace(self, seed=int(seed))


class Sensor(NamedTuple):
    position: Tuple[int, int]
    modality: Modality
    zone_id: int


@dataclass(frozen=True, eq=False)
class SensorField(object):
    config: FieldConfig
    modality: np.ndarray        # [y, x] -> Modality value
    zone_id: np.ndarray         # [y, x] -> zone index
    zone_centres: np.ndarray    # zone -> (x, y)
    zone_modality: np.ndarray   # zone -> Modality value

    @property
    def side_length(self):
        return self.config.side_length

    @property
    def shape(self):
        return self.modality.shape

    @property
    def n_zones(self):
        return len(self.zone_centres)

    def sensor(self, position):
        x, y = position
        return Sensor((int(x), int(y)), Modality(int(self.modality[y, x])), int(self.zone_id[y, x]))

    def __iter__(self):
        side = self.side_length
        for y in range(side):
            for x in range(side):
                yield self.sensor((x, y))

    def zone_radii(self):
        """Normalised radius sqrt(x^2 + y^2) of each zone centre."""
        coords = self.zone_centres.astype(float) / (self.side_length - 1)
        return np.hypot(coords[:, 0], coords[:, 1])

    def modality_counts(self):
        return np.bincount(self.modality.ravel(), minlength=len(Modality))


@dataclass(frozen=True, eq=False)
class Snapshot(object):
    time: int
    readings: np.ndarray

    def __post_init__(self):
        readings = np.array(self.readings, dtype=np.float64)
        readings.setflags(write=False)
        object.__setattr__(self, "readings", readings)

    @property
    def shape(self):
        return self.readings.shape


def modality_targets(n, fractions):
    """Sensor counts per modality, rounded so they sum to `n`.

    Largest-remainder rounding: every count is within one sensor of fraction * n.
    """
    exact = np.asarray(fractions, dtype=float) * n
    counts = np.floor(exact).astype(int)
    remainder = n - counts.sum()
    # ties broken by modality order
    order = np.lexsort((np.arange(len(counts)), -(exact - counts)))
    counts[order[:remainder]] += 1
    return counts


@lru_cache(maxsize=32)
def build_field(config):
    """Build the sensor field for `config` (deterministic in `config.seed`).

    Zone centres are distinct keyed cells, and each centre's own cell is pinned to
    its zone. The remaining sensors are split between modalities by additively
    weighted nearest-centre distance, smallest modality first, so each modality gets
    exactly its target share. Within a modality, a sensor joins its nearest centre
    (a Voronoi cell restricted to that modality's area).
    """
    config.validate()
    side = config.side_length
    n = config.n_sensors
    zone_counts = np.asarray(config.zone_counts, dtype=int)
    n_modalities = len(Modality)

    stream = KeyedStream(config.seed, FIELD_STREAM)
    cells = stream.permutation(n)[:zone_counts.sum()]
    zone_modality = np.repeat(np.arange(n_modalities), zone_counts)
    zone_centres = np.column_stack([cells % side, cells // side])

    ys, xs = np.divmod(np.arange(n), side)
    points = np.column_stack([xs, ys]).astype(float)
    sqdist = np.empty((n, n_modalities))
    nearest = np.empty((n, n_modalities), dtype=np.int64)
    for m in range(n_modalities):
        zones = np.flatnonzero(zone_modality == m)
        dist, idx = cKDTree(zone_centres[zones].astype(float)).query(points)
        sqdist[:, m] = dist ** 2
        nearest[:, m] = zones[idx]

    modality = np.full(n, -1, dtype=np.int64)
    modality[cells] = zone_modality
    targets = modality_targets(n, config.modality_fractions)

    remaining = list(np.argsort(targets, kind="stable"))
    while len(remaining) > 1:
        m = remaining.pop(0)
        free = np.flatnonzero(modality < 0)
        need = targets[m] - np.count_nonzero(modality == m)
        others = sqdist[np.ix_(free, remaining)].min(axis=1)
        score = sqdist[free, m] - others
        chosen = free[np.lexsort((free, score))[:need]]
        modality[chosen] = m
    modality[modality < 0] = remaining[0]

    zone_id = nearest[np.arange(n), modality]
    arrays = dict(
        modality=modality.reshape(side, side).astype(np.int8),
        zone_id=zone_id.reshape(side, side).astype(np.int32),
        zone_centres=zone_centres.astype(np.int64),
        zone_modality=zone_modality.astype(np.int8),
    )
    # fields are cached and shared, so make them immutable
    for array in arrays.values():
        array.setflags(write=False)
    return SensorField(config=config, **arrays)


def modality_mean(config, modality, radius, t):
    """Analytic mean of a sensor of `modality` in a zone at normalised `radius`."""
    rate = np.asarray(config.drift_rates, dtype=float)[np.asarray(modality, dtype=int)]
    return config.base_mean * (1.0 + rate * (t / 4.0) * np.asarray(radius, dtype=float))


def analytic_means(field, t):
    """Grid of analytic means at tick `t`; constant over each zone."""
    zone_means = modality_mean(field.config, field.zone_modality, field.zone_radii(), t)
    return zone_means[field.zone_id]


def _check_tick(t):
    if int(t) != t or t < 0:
        raise ValueError(f"tick must be a non-negative integer, got {t}")
    return int(t)


def sense_snapshot(field, t, noise_seed):
    """One reading per sensor at tick `t`.

    Sensor `i = y * side + x` draws its noise from counter `i` of the stream derived
    from (noise_seed, t), so its value doesn't depend on any other sensor.
    """
    t = _check_tick(t)
    state = derive_seed(noise_seed, NOISE_STREAM, t)
    noise = standard_normal_at(state, np.arange(field.config.n_sensors)).reshape(field.shape)
    return Snapshot(time=t, readings=analytic_means(field, t) + field.config.std_dev * noise)


def sense_sensor(field, t, noise_seed, position):
    """The reading `sense_snapshot(field, t, noise_seed)` has at `position`."""
    t = _check_tick(t)
    x, y = position
    zone = field.zone_id[y, x]
    mean = modality_mean(field.config, field.zone_modality[zone], field.zone_radii()[zone], t)
    state = derive_seed(noise_seed, NOISE_STREAM, t)
    noise = standard_normal_at(state, np.array([y * field.side_length + x]))[0]
    return float(mean + field.config.std_dev * noise)


def apply_attack(snapshot, deltas):
    """Copy of `snapshot` with the readings at the delta positions replaced.

    :param deltas: iterable of ((x, y), new_value)
    """
    readings = np.array(snapshot.readings, dtype=np.float64)
    height, width = readings.shape
    for position, value in deltas:
        x, y = position
        if not (0 <= x < width and 0 <= y < height):
            raise AttackError(f"position {position} is outside the {width}x{height} grid")
        readings[y, x] = value
    return Snapshot(time=snapshot.time, readings=readings)
