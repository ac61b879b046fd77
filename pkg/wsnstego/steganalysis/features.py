# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Calibrated DCT-domain features.

Layout of the raw block (154 values, all normalised to frequencies):

    ac_hist      17   global AC histogram over -8..8 (clamped)
    mode_hist    55   histograms over -5..5 (clamped) of modes (0,1) (1,0) (2,0) (1,1) (0,2)
    cooc         81   co-occurrence of horizontally and vertically adjacent AC coefficients
                      within a block, clamped to -4..4
    blockiness    1   mean absolute pixel step across block boundaries of the decompressed
                      image

followed by the same 154 values minus those of the calibrated reference (decompress,
crop 4 pixels on top and left, transform again at the same quality): d = 308.
"""

from dataclasses import dataclass
from typing import Optional
import csv

import numpy as np

from ..dct import BLOCK, forward, inverse
from ..imageio import GrayImage, ImageIOError, raiseimageio
from ..utils import makedirs_for

AC_CLAMP = 8
MODE_CLAMP = 5
COOC_CLAMP = 4
MODES = ((0, 1), (1, 0), (2, 0), (1, 1), (0, 2))
CALIBRATION_CROP = 4

COVER = 0
STEGO = 1


def _feature_names():
    names = [f"ac_hist[{v}]" for v in range(-AC_CLAMP, AC_CLAMP + 1)]
    for i, j in MODES:
        names += [f"mode{i}{j}_hist[{v}]" for v in range(-MODE_CLAMP, MODE_CLAMP + 1)]
    names += [f"cooc[{a},{b}]" for a in range(-COOC_CLAMP, COOC_CLAMP + 1)
              for b in range(-COOC_CLAMP, COOC_CLAMP + 1)]
    names.append("blockiness")
    return names + [f"cal_{name}" for name in names]


FEATURE_NAMES = _feature_names()
N_RAW = len(FEATURE_NAMES) // 2
N_FEATURES = len(FEATURE_NAMES)


@dataclass(frozen=True, eq=False)
class FeatureVector(object):
    values: np.ndarray
    label: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"feature vector {self.name!r} has non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


def _histogram(values, clamp):
    values = np.clip(np.asarray(values, dtype=np.int64).ravel(), -clamp, clamp) + clamp
    if values.size == 0:
        return np.zeros(2 * clamp + 1)
    return np.bincount(values, minlength=2 * clamp + 1) / values.size


def _cooccurrence(coeffs):
    width = 2 * COOC_CLAMP + 1
    c = np.clip(coeffs.astype(np.int64), -COOC_CLAMP, COOC_CLAMP) + COOC_CLAMP
    # drop pairs involving the DC term
    ac = np.ones((BLOCK, BLOCK), dtype=bool)
    ac[0, 0] = False
    horizontal = (ac[:, :-1] & ac[:, 1:])
    vertical = (ac[:-1, :] & ac[1:, :])
    firsts = np.concatenate([c[..., :, :-1][..., horizontal], c[..., :-1, :][..., vertical]], axis=-1)
    seconds = np.concatenate([c[..., :, 1:][..., horizontal], c[..., 1:, :][..., vertical]], axis=-1)
    counts = np.bincount((firsts * width + seconds).ravel(), minlength=width * width)
    return counts / max(firsts.size, 1)


def blockiness(image):
    pixels = np.asarray(image.pixels, dtype=float)
    rows = np.arange(BLOCK, pixels.shape[0], BLOCK)
    cols = np.arange(BLOCK, pixels.shape[1], BLOCK)
    steps = np.concatenate([np.abs(pixels[rows - 1, :] - pixels[rows, :]).ravel(),
                            np.abs(pixels[:, cols - 1] - pixels[:, cols]).ravel()])
    return float(steps.mean()) if steps.size else 0.0


def raw_features(plane, image=None):
    """The 154 uncalibrated features of `plane`."""
    blocks = plane.coeffs.reshape(-1, BLOCK, BLOCK)
    if image is None:
        image = inverse(plane)
    parts = [_histogram(plane.ac_coefficients(), AC_CLAMP)]
    parts += [_histogram(blocks[:, i, j], MODE_CLAMP) for i, j in MODES]
    parts.append(_cooccurrence(blocks))
    parts.append([blockiness(image)])
    return np.concatenate(parts)


def calibrated_reference(plane, image=None):
    if image is None:
        image = inverse(plane)
    cropped = image.pixels[CALIBRATION_CROP:, CALIBRATION_CROP:]
    return forward(GrayImage(np.ascontiguousarray(cropped)), plane.quality)


def extract_features(plane, label=None, name=""):
    image = inverse(plane)
    raw = raw_features(plane, image)
    reference = calibrated_reference(plane, image)
    return FeatureVector(np.concatenate([raw, raw - raw_features(reference)]), label, name)


def feature_matrix(vectors):
    return np.vstack([v.values for v in vectors]) if vectors else np.zeros((0, N_FEATURES))


@raiseimageio
def write_features_csv(vectors, path):
    """One row per exemplar: name, label, then every feature."""
    makedirs_for(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["exemplar", "label"] + FEATURE_NAMES)
        for vector in vectors:
            label = "" if vector.label is None else int(vector.label)
            writer.writerow([vector.name, label] + [repr(float(v)) for v in vector.values])


@raiseimageio
def read_features_csv(path):
    vectors = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["exemplar", "label"] or len(header) != N_FEATURES + 2:
            raise ImageIOError(f"unexpected feature CSV header in {path}")
        for row in reader:
            label = int(row[1]) if row[1] != "" else None
            vectors.append(FeatureVector([float(v) for v in row[2:]], label, row[0]))
    return vectors
