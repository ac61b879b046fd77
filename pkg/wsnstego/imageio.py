# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Sink-side image views of a snapshot, and the PGM/CSV interchange formats."""

from dataclasses import dataclass
from typing import NamedTuple, Tuple
import csv
import functools

import imageio.v3 as iio
import numpy as np

from .field import Modality, Snapshot
from .utils import makedirs_for, round_half_away

# Rec. 601 luma; the inverse mapping below relies on the same constants
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


class ImageIOError(Exception):
    pass


def raiseimageio(func):
    """Decorator to raise an ImageIOError if anything goes wrong with `func`."""
    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ImageIOError:
            raise
        except Exception as err:
            raise ImageIOError(f"{func.__name__} failed: {err}") from err
    return wrapped


@dataclass(frozen=True, eq=False)
class RgbImage(object):
    pixels: np.ndarray  # (height, width, 3) uint8

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class GrayImage(object):
    pixels: np.ndarray  # (height, width) uint8

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2:
            raise ValueError(f"gray image must be 2-D, got shape {pixels.shape}")
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise ValueError("gray pixels must be in [0, 255]")
            pixels = pixels.astype(np.uint8)
        object.__setattr__(self, "pixels", pixels)

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def shape(self):
        return self.pixels.shape

    def __eq__(self, other):
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)


class SensorDelta(NamedTuple):
    position: Tuple[int, int]
    value: float


def _check_shapes(snapshot, field):
    if snapshot.shape != field.shape:
        raise ValueError(f"snapshot shape {snapshot.shape} doesn't match field shape {field.shape}")


def channel_values(readings):
    """Rounded readings clamped to the [0, 255] channel range."""
    return np.clip(round_half_away(readings), 0, 255).astype(np.uint8)


def snapshot_to_rgb(snapshot, field):
    """Temperature to red, pressure to green, humidity to blue; other channels 0."""
    _check_shapes(snapshot, field)
    values = channel_values(snapshot.readings)
    pixels = np.zeros(snapshot.shape + (3,), dtype=np.uint8)
    rows, cols = np.indices(snapshot.shape)
    pixels[rows, cols, field.modality.astype(int)] = values
    return RgbImage(pixels)


def rgb_to_gray(image):
    luma = image.pixels.astype(float) @ LUMA_WEIGHTS
    return GrayImage(np.clip(round_half_away(luma), 0, 255).astype(np.uint8))


def render_gray(snapshot, field):
    return rgb_to_gray(snapshot_to_rgb(snapshot, field))


@functools.lru_cache(maxsize=None)
def _gray_of_channel(modality):
    """Gray level produced by each channel value 0..255 of `modality`."""
    gray = round_half_away(LUMA_WEIGHTS[modality] * np.arange(256, dtype=float))
    gray = gray.astype(np.int64)
    gray.setflags(write=False)
    return gray


def gray_delta_to_sensor_deltas(before, after, field, snapshot):
    """Sensor edits that make `snapshot` render as `after` where it differs from `before`.

    Only one channel of a pixel is nonzero, so the gray level is
    round(weight * channel). For each changed pixel the new channel value is the one
    closest to the sensor's current channel value among those rendering to the target
    gray level; targets above the channel's reach are clamped to 255.
    """
    if before.shape != after.shape:
        raise ValueError(f"image dimensions differ: {before.shape} vs {after.shape}")
    if before.shape != field.shape:
        raise ValueError(f"image shape {before.shape} doesn't match field shape {field.shape}")
    _check_shapes(snapshot, field)

    ys, xs = np.nonzero(before.pixels != after.pixels)
    targets = after.pixels[ys, xs].astype(np.int64)
    current = channel_values(snapshot.readings[ys, xs]).astype(np.int64)
    modality = field.modality[ys, xs]
    values = np.empty(len(ys), dtype=np.int64)
    for m in Modality:
        sel = modality == m
        gray = _gray_of_channel(int(m))
        lo = np.searchsorted(gray, targets[sel], side="left")
        hi = np.searchsorted(gray, targets[sel], side="right") - 1
        hi = np.minimum(hi, 255)
        lo = np.minimum(lo, hi)
        values[sel] = np.clip(current[sel], lo, hi)
    return [SensorDelta((int(x), int(y)), float(v)) for x, y, v in zip(xs, ys, values)]


@raiseimageio
def write_pgm(image, path):
    """Binary PGM (P5, maxval 255)."""
    makedirs_for(path)
    iio.imwrite(path, np.ascontiguousarray(image.pixels, dtype=np.uint8),
                plugin="pillow", extension=".pgm")


@raiseimageio
def read_pgm(path):
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic != b"P5":
        raise ImageIOError(f"{path} is not a binary PGM (magic {magic!r})")
    pixels = iio.imread(path, plugin="pillow", extension=".pgm")
    if pixels.ndim != 2 or pixels.dtype != np.uint8:
        raise ImageIOError(f"unsupported PGM in {path}: {pixels.dtype} pixels of shape {pixels.shape}")
    return GrayImage(np.array(pixels))


SNAPSHOT_CSV_FIELDS = ["x", "y", "modality", "reading"]


@raiseimageio
def write_snapshot_csv(snapshot, field, path):
    _check_shapes(snapshot, field)
    makedirs_for(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SNAPSHOT_CSV_FIELDS)
        height, width = snapshot.shape
        for y in range(height):
            for x in range(width):
                writer.writerow([x, y, Modality(int(field.modality[y, x])).label,
                                 repr(float(snapshot.readings[y, x]))])


@raiseimageio
def read_snapshot_csv(path, time):
    """Load readings dumped by `write_snapshot_csv` as a Snapshot at tick `time`."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SNAPSHOT_CSV_FIELDS:
            raise ImageIOError(f"unexpected snapshot CSV header in {path}: {reader.fieldnames}")
        rows = [(int(r["x"]), int(r["y"]), float(r["reading"])) for r in reader]
    if not rows:
        raise ImageIOError(f"empty snapshot CSV {path}")
    xs, ys, values = (np.array(c) for c in zip(*rows))
    readings = np.full((ys.max() + 1, xs.max() + 1), np.nan)
    readings[ys, xs] = values
    if np.isnan(readings).any():
        raise ImageIOError(f"snapshot CSV {path} doesn't cover the whole grid")
    return Snapshot(time=int(time), readings=readings)


@raiseimageio
def write_deltas_csv(deltas, snapshot, path):
    makedirs_for(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "old", "new"])
        for (x, y), value in deltas:
            writer.writerow([x, y, repr(float(snapshot.readings[y, x])), repr(float(value))])
