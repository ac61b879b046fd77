# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""JPEG-style quantized block DCT of a gray image.

Only the coefficient domain is modelled: no entropy coding, no chroma. Images are
edge-padded to whole 8x8 blocks, level shifted by -128, transformed with the
orthonormal 2-D DCT-II, divided by the Annex K luminance table scaled to `quality`
and rounded half away from zero.
"""

from dataclasses import dataclass
import csv

import numpy as np
from scipy import fft
from skimage.util import view_as_blocks

from .imageio import GrayImage, raiseimageio, ImageIOError
from .utils import makedirs_for, round_half_away

BLOCK = 8

# ITU T.81 Annex K, table K.1
LUMINANCE_TABLE = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.int64)


class GeometryError(ValueError):
    pass


def _check_quality(quality):
    if int(quality) != quality or not 1 <= quality <= 100:
        raise ValueError(f"quality must be an integer in [1, 100], got {quality}")
    return int(quality)


def quant_table(quality):
    """Luminance table scaled to `quality` the way libjpeg does it.

    >>> int(quant_table(50)[0, 0])
    16
    >>> int(quant_table(100).max())
    1
    """
    quality = _check_quality(quality)
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    table = np.clip((LUMINANCE_TABLE * scale + 50) // 100, 1, 255)
    table.setflags(write=False)
    return table


def block_dct(blocks):
    """Unquantized orthonormal DCT-II over the last two axes."""
    return fft.dctn(np.asarray(blocks, dtype=float), type=2, axes=(-2, -1), norm="ortho")


def block_idct(coefficients):
    return fft.idctn(np.asarray(coefficients, dtype=float), type=2, axes=(-2, -1), norm="ortho")


@dataclass(frozen=True, eq=False)
class DctPlane(object):
    coeffs: np.ndarray  # (block_rows, block_cols, 8, 8) quantized integers
    quality: int
    height: int
    width: int

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.int32)
        if coeffs.ndim != 4 or coeffs.shape[2:] != (BLOCK, BLOCK):
            raise GeometryError(f"coefficients must have shape (rows, cols, 8, 8), got {coeffs.shape}")
        rows, cols = coeffs.shape[:2]
        if not (rows == -(-self.height // BLOCK) and cols == -(-self.width // BLOCK)):
            raise GeometryError(f"{rows}x{cols} blocks can't hold a {self.width}x{self.height} image")
        _check_quality(self.quality)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def block_shape(self):
        return self.coeffs.shape[:2]

    @property
    def n_blocks(self):
        return self.coeffs.shape[0] * self.coeffs.shape[1]

    @property
    def quant(self):
        return quant_table(self.quality)

    def ac_coefficients(self):
        """AC coefficients as a flat vector: blocks in raster order, then (i, j) raster
        order within the block with the DC term skipped."""
        return self.coeffs.reshape(-1, BLOCK * BLOCK)[:, 1:].ravel()

    def with_ac(self, values):
        """Copy of this plane with its AC coefficients replaced by `values`."""
        values = np.asarray(values)
        flat = self.coeffs.reshape(-1, BLOCK * BLOCK).copy()
        if values.size != flat.shape[0] * (BLOCK * BLOCK - 1):
            raise GeometryError(f"expected {flat.shape[0] * 63} AC values, got {values.size}")
        flat[:, 1:] = values.reshape(-1, BLOCK * BLOCK - 1)
        return DctPlane(flat.reshape(self.coeffs.shape), self.quality, self.height, self.width)

    def same_geometry(self, other):
        return (self.coeffs.shape == other.coeffs.shape and self.height == other.height
                and self.width == other.width and self.quality == other.quality)

    def __eq__(self, other):
        return (isinstance(other, DctPlane) and self.same_geometry(other)
                and np.array_equal(self.coeffs, other.coeffs))


def ac_position_to_index(plane, positions):
    """Map flat AC positions to (block_row, block_col, i, j) index arrays."""
    positions = np.asarray(positions, dtype=np.int64)
    block, k = np.divmod(positions, BLOCK * BLOCK - 1)
    k = k + 1
    block_row, block_col = np.divmod(block, plane.block_shape[1])
    i, j = np.divmod(k, BLOCK)
    return block_row, block_col, i, j


def forward(image, quality):
    """Quantized DCT plane of a gray image."""
    quality = _check_quality(quality)
    pixels = np.asarray(image.pixels, dtype=float)
    height, width = pixels.shape
    pad_rows = -height % BLOCK
    pad_cols = -width % BLOCK
    padded = np.pad(pixels, ((0, pad_rows), (0, pad_cols)), mode="edge") - 128.0
    blocks = view_as_blocks(padded, (BLOCK, BLOCK))
    coefficients = block_dct(blocks) / quant_table(quality)
    return DctPlane(round_half_away(coefficients).astype(np.int32), quality, height, width)


def inverse(plane):
    """Dequantize, inverse transform, undo the level shift, clamp and crop."""
    blocks = block_idct(plane.coeffs * plane.quant) + 128.0
    blocks = np.clip(round_half_away(blocks), 0, 255).astype(np.uint8)
    rows, cols = plane.block_shape
    pixels = blocks.transpose(0, 2, 1, 3).reshape(rows * BLOCK, cols * BLOCK)
    return GrayImage(np.ascontiguousarray(pixels[:plane.height, :plane.width]))


def nonzero_ac_count(plane):
    return int(np.count_nonzero(plane.ac_coefficients()))


def capacity(plane, rate):
    """Message bits that fit at `rate` bits per nonzero AC coefficient."""
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    # 1e-9 absorbs products like 0.29 * 100 = 28.999999999999996
    return int(np.floor(rate * nonzero_ac_count(plane) + 1e-9))


PLANE_CSV_FIELDS = ["block_row", "block_col", "i", "j", "coeff"]


@raiseimageio
def write_plane_csv(plane, path):
    makedirs_for(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# quality={plane.quality} height={plane.height} width={plane.width}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PLANE_CSV_FIELDS)
        for (r, c, i, j), value in np.ndenumerate(plane.coeffs):
            writer.writerow([r, c, i, j, int(value)])


@raiseimageio
def read_plane_csv(path):
    with open(path, newline="") as fh:
        meta = dict(kv.split("=") for kv in fh.readline().lstrip("#").split())
        reader = csv.DictReader(fh)
        if reader.fieldnames != PLANE_CSV_FIELDS:
            raise ImageIOError(f"unexpected plane CSV header in {path}: {reader.fieldnames}")
        rows = np.array([[int(r[f]) for f in PLANE_CSV_FIELDS] for r in reader], dtype=np.int64)
    height, width = int(meta["height"]), int(meta["width"])
    shape = (-(-height // BLOCK), -(-width // BLOCK), BLOCK, BLOCK)
    coeffs = np.zeros(shape, dtype=np.int32)
    if len(rows):
        coeffs[rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]] = rows[:, 4]
    return DctPlane(coeffs, int(meta["quality"]), height, width)
