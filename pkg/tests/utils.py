import os.path as op

import numpy as np
import pytest

from wsnstego.config import ExperimentConfig
from wsnstego.dct import DctPlane
from wsnstego.field import FieldConfig
from wsnstego.imageio import GrayImage


def random_plane(seed, blocks=(8, 8), scale=2.0, quality=80):
    """Laplacian distributed quantized coefficients, like a textured JPEG."""
    rng = np.random.default_rng(seed)
    coeffs = np.round(rng.laplace(0, scale, size=tuple(blocks) + (8, 8))).astype(np.int32)
    return DctPlane(coeffs, quality, blocks[0] * 8, blocks[1] * 8)


def random_gray(seed, shape=(32, 32), low=0, high=256):
    rng = np.random.default_rng(seed)
    return GrayImage(rng.integers(low, high, size=shape).astype(np.uint8))


def random_bits(seed, n):
    return np.random.default_rng(seed).integers(0, 2, size=n).astype(np.uint8)


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


@pytest.fixture
def small_field_config():
    return FieldConfig(side_length=32, zone_counts=(4, 3, 2), seed=3)


@pytest.fixture
def small_config(tmpdir):
    return ExperimentConfig().override(**SMALL_EXPERIMENT,
                                       out=str(tmpdir.join("out"))).validate()


SMALL_EXPERIMENT = dict(
    side_length=32,
    zone_counts=(3, 3, 2),
    ticks=(50, 100),
    pairs=12,
    fields=3,
    learners=10,
    oob_step=5,
)


def outdir(config, name):
    return op.join(config.out, name)
