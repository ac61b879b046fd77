from wsnstego.dct import *
from wsnstego.imageio import GrayImage
from wsnstego.utils import round_half_away

from .utils import *

import numpy as np
import pytest


def dct_matrix():
    k = np.arange(BLOCK)[:, np.newaxis]
    n = np.arange(BLOCK)[np.newaxis, :]
    C = np.cos(np.pi * (2 * n + 1) * k / (2 * BLOCK)) * np.sqrt(2.0 / BLOCK)
    C[0, :] = np.sqrt(1.0 / BLOCK)
    return C


def test_quant_table():
    assert np.array_equal(quant_table(50), LUMINANCE_TABLE)
    assert np.all(quant_table(100) == 1)
    # quality 80 scales by 40%
    assert quant_table(80)[0, 0] == 6
    assert quant_table(1).max() == 255
    for quality in (0, 101, 50.5):
        with pytest.raises(ValueError):
            quant_table(quality)


def test_orthonormal_transform():
    C = dct_matrix()
    rng = np.random.default_rng(3)
    blocks = rng.uniform(-128, 127, size=(20, BLOCK, BLOCK))
    direct = np.einsum("ki,bij,lj->bkl", C, blocks, C)
    assert np.allclose(block_dct(blocks), direct, rtol=1e-9, atol=1e-9)
    assert np.allclose(block_idct(block_dct(blocks)), blocks, rtol=1e-9, atol=1e-9)


def test_constant_blocks():
    plane = forward(GrayImage(np.full((16, 16), 128)), 80)
    assert plane.block_shape == (2, 2)
    assert not plane.coeffs.any()

    plane = forward(GrayImage(np.full((8, 8), 255)), 80)
    expect_dc = round_half_away(8 * 127 / quant_table(80)[0, 0])
    assert plane.coeffs[0, 0, 0, 0] == expect_dc == 169
    assert np.count_nonzero(plane.coeffs) == 1


def test_zero_plane_inverse():
    plane = DctPlane(np.zeros((2, 3, 8, 8)), 75, 16, 24)
    image = inverse(plane)
    assert image.shape == (16, 24)
    assert np.all(image.pixels == 128)


def test_roundtrip_quality_100():
    for seed in range(20):
        image = random_gray(seed, shape=(32, 32))
        back = inverse(forward(image, 100))
        error = np.abs(back.pixels.astype(int) - image.pixels.astype(int))
        assert error.max() <= 1


@pytest.mark.slow
def test_roundtrip_quality_100_many():
    for seed in range(100):
        image = random_gray(seed, shape=(64, 64))
        back = inverse(forward(image, 100))
        assert np.abs(back.pixels.astype(int) - image.pixels.astype(int)).max() <= 1


def test_padding():
    image = random_gray(4, shape=(10, 13))
    plane = forward(image, 90)
    assert plane.block_shape == (2, 2)
    assert (plane.height, plane.width) == (10, 13)
    assert inverse(plane).shape == (10, 13)


def test_block_replacement():
    a = random_gray(5, shape=(24, 32))
    b = random_gray(6, shape=(24, 32))
    plane_a, plane_b = forward(a, 75), forward(b, 75)
    for row, col in ((0, 0), (1, 2), (2, 3)):
        window = np.s_[8 * row:8 * row + 8, 8 * col:8 * col + 8]
        mixed = a.pixels.copy()
        mixed[window] = b.pixels[window]
        expected = plane_a.coeffs.copy()
        expected[row, col] = plane_b.coeffs[row, col]
        assert np.array_equal(forward(GrayImage(mixed), 75).coeffs, expected)

        coeffs = plane_a.coeffs.copy()
        coeffs[row, col] = plane_b.coeffs[row, col]
        expected = inverse(plane_a).pixels.copy()
        expected[window] = inverse(plane_b).pixels[window]
        assert np.array_equal(inverse(DctPlane(coeffs, 75, 24, 32)).pixels, expected)


def test_capacity():
    assert capacity(DctPlane(np.zeros((1, 1, 8, 8)), 80, 8, 8), 0.1) == 0

    dc_only = np.zeros((1, 1, 8, 8))
    dc_only[0, 0, 0, 0] = 5
    plane = DctPlane(dc_only, 80, 8, 8)
    assert nonzero_ac_count(plane) == 0
    assert capacity(plane, 0.1) == 0

    plane = DctPlane(np.zeros((14, 14, 8, 8)), 80, 112, 112)
    values = np.zeros(14 * 14 * 63, dtype=int)
    values[:12345] = 1
    plane = plane.with_ac(values)
    assert nonzero_ac_count(plane) == 12345
    assert capacity(plane, 0.1) == 1234
    assert capacity(plane, 0.0) == 0
    with pytest.raises(ValueError):
        capacity(plane, -0.1)


def test_ac_layout():
    plane = random_plane(1, blocks=(2, 3))
    ac = plane.ac_coefficients()
    assert ac.size == 6 * 63
    assert ac[0] == plane.coeffs[0, 0, 0, 1]
    assert ac[63] == plane.coeffs[0, 1, 0, 1]
    assert ac[3 * 63 + 62] == plane.coeffs[1, 0, 7, 7]

    r, c, i, j = ac_position_to_index(plane, [0, 63, 3 * 63 + 62])
    assert list(zip(r, c, i, j)) == [(0, 0, 0, 1), (0, 1, 0, 1), (1, 0, 7, 7)]

    # DC terms survive with_ac
    replaced = plane.with_ac(np.zeros(ac.size))
    assert np.array_equal(replaced.coeffs[:, :, 0, 0], plane.coeffs[:, :, 0, 0])
    assert not replaced.ac_coefficients().any()
    with pytest.raises(GeometryError):
        plane.with_ac(np.zeros(5))


def test_plane_geometry():
    with pytest.raises(GeometryError):
        DctPlane(np.zeros((2, 2, 8, 7)), 80, 16, 16)
    with pytest.raises(GeometryError):
        DctPlane(np.zeros((2, 2, 8, 8)), 80, 32, 16)
    plane = random_plane(2, blocks=(2, 2))
    with pytest.raises(ValueError):
        plane.coeffs[0, 0, 0, 0] = 1
    assert plane == random_plane(2, blocks=(2, 2))
    assert plane != random_plane(3, blocks=(2, 2))


def test_plane_csv(tmpdir):
    plane = forward(random_gray(5, shape=(20, 12)), 85)
    path = str(tmpdir.join("plane.csv"))
    write_plane_csv(plane, path)
    with open(path) as fh:
        assert fh.readline().strip() == "# quality=85 height=20 width=12"
        assert fh.readline().strip() == "block_row,block_col,i,j,coeff"
    assert read_plane_csv(path) == plane
