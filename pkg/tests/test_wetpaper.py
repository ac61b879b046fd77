from wsnstego.stego.wetpaper import *
from wsnstego.stego import Unsolvable
from wsnstego.prng import KeyedStream

from .data import *
from .utils import *

import functools
import itertools
import operator

import numpy as np
import pytest


def column_ints(D):
    weights = 1 << np.arange(D.shape[0], dtype=np.int64)
    return [int(v) for v in weights @ D.astype(np.int64)]


def reachable_syndromes(columns):
    """Every XOR of a subset of `columns`, by exhaustive closure."""
    span = {0}
    for col in columns:
        span |= {s ^ col for s in span}
    return span


def test_worked_example():
    system = WetPaperSystem(WET_PAPER_D, WET_PAPER_SOLVABLE_DRY).validate()
    v = wet_paper_solve(system, WET_PAPER_DELTA)
    assert v.tolist() == WET_PAPER_SOLUTION.tolist()
    assert np.array_equal(gf2_matvec(WET_PAPER_D, v), WET_PAPER_DELTA)

    with pytest.raises(Unsolvable):
        wet_paper_solve(WetPaperSystem(WET_PAPER_D, WET_PAPER_UNSOLVABLE_DRY), WET_PAPER_DELTA)


def test_zero_delta():
    system = WetPaperSystem(WET_PAPER_D, np.zeros(4, dtype=bool))
    assert not wet_paper_solve(system, np.zeros(3, dtype=np.uint8)).any()


def check_random_systems(n_systems, seed):
    rng = np.random.default_rng(seed)
    for trial in range(n_systems):
        k = int(rng.integers(1, 11))
        n = int(rng.integers(1, min(16, 2 ** k - 1) + 1))
        D = random_columns(KeyedStream(seed, trial), k, n)
        dry = rng.random(n) < rng.uniform(0.2, 0.9)
        delta = rng.integers(0, 2, size=k).astype(np.uint8)
        system = WetPaperSystem(D, dry).validate()

        columns = column_ints(D)
        reachable = column_ints(delta[:, np.newaxis])[0] in \
            reachable_syndromes([columns[i] for i in np.flatnonzero(dry)])
        try:
            v = wet_paper_solve(system, delta)
        except Unsolvable:
            assert not reachable
            continue
        assert reachable
        assert np.array_equal(gf2_matvec(D, v), delta)
        assert not v[~dry].any()


def test_exhaustive_oracle():
    check_random_systems(2000, seed=1)


@pytest.mark.slow
def test_exhaustive_oracle_many():
    check_random_systems(10000, seed=2)


def test_random_columns():
    D = random_columns(KeyedStream(1), 4, 15)
    assert D.shape == (4, 15)
    # all 15 nonzero columns of height 4
    assert sorted(column_ints(D)) == list(range(1, 16))
    assert np.array_equal(D, random_columns(KeyedStream(1), 4, 15))
    assert random_columns(KeyedStream(1), 3, 0).shape == (3, 0)
    with pytest.raises(ValueError):
        random_columns(KeyedStream(1), 3, 8)
    with pytest.raises(ValueError):
        random_columns(KeyedStream(1), 0, 1)


def test_gf2_solve():
    rng = np.random.default_rng(3)
    for _ in range(200):
        A = rng.integers(0, 2, size=(6, 9)).astype(np.uint8)
        x = rng.integers(0, 2, size=9).astype(np.uint8)
        b = gf2_matvec(A, x)
        solution = gf2_solve(A, b)
        assert solution is not None
        assert np.array_equal(gf2_matvec(A, solution), b)
    # x1 = 1 and x1 = 0
    assert gf2_solve(np.array([[1], [1]]), np.array([1, 0])) is None


def test_system_validation():
    with pytest.raises(ValueError):
        WetPaperSystem(np.zeros((2, 3)), np.ones(2, dtype=bool))
    with pytest.raises(ValueError):
        WetPaperSystem(np.array([[1, 1], [0, 0]]), np.ones(2, dtype=bool)).validate()
    with pytest.raises(ValueError):
        WetPaperSystem(np.array([[1, 0], [0, 0]]), np.ones(2, dtype=bool)).validate()
    system = WetPaperSystem(WET_PAPER_D, WET_PAPER_SOLVABLE_DRY)
    assert (system.k, system.n, system.wet_count) == (3, 4, 1)
    assert system.dry_indices.tolist() == [0, 1, 3]
    with pytest.raises(ValueError):
        wet_paper_solve(system, np.zeros(2, dtype=np.uint8))


def minimum_weight(columns, target):
    """Fewest of `columns` whose XOR is `target`, by exhaustive search, or None."""
    for weight in range(len(columns) + 1):
        for subset in itertools.combinations(columns, weight):
            if functools.reduce(operator.xor, subset, 0) == target:
                return weight
    return None


def test_min_weight_oracle():
    rng = np.random.default_rng(4)
    for trial in range(500):
        k = int(rng.integers(1, 9))
        n = int(rng.integers(1, min(12, 2 ** k - 1) + 1))
        D = random_columns(KeyedStream(4, trial), k, n)
        dry = rng.random(n) < 0.7
        delta = rng.integers(0, 2, size=k).astype(np.uint8)
        columns = column_ints(D)
        best = minimum_weight([columns[i] for i in np.flatnonzero(dry)],
                              column_ints(delta[:, np.newaxis])[0])
        try:
            v = min_weight_solve(WetPaperSystem(D, dry), delta)
        except Unsolvable:
            assert best is None
            continue
        assert np.array_equal(gf2_matvec(D, v), delta)
        assert not v[~dry].any()
        assert int(v.sum()) == best


def test_min_weight_never_worse():
    rng = np.random.default_rng(5)
    for trial in range(50):
        D = random_columns(KeyedStream(5, trial), 12, 100)
        system = WetPaperSystem(D, rng.random(100) < 0.3)
        delta = rng.integers(0, 2, size=12).astype(np.uint8)
        v = min_weight_solve(system, delta)
        assert v.sum() <= wet_paper_solve(system, delta).sum()


def test_min_weight_limits():
    assert not min_weight_solve(WetPaperSystem(WET_PAPER_D, np.zeros(4, dtype=bool)),
                                np.zeros(3, dtype=np.uint8)).any()
    with pytest.raises(Unsolvable):
        min_weight_solve(WetPaperSystem(WET_PAPER_D, np.zeros(4, dtype=bool)),
                         np.ones(3, dtype=np.uint8))
    with pytest.raises(ValueError):
        min_weight_solve(WetPaperSystem(np.ones((MAX_SEARCH_BITS + 1, 1)), [True]),
                         np.zeros(MAX_SEARCH_BITS + 1, dtype=np.uint8))
