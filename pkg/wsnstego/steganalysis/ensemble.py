# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Random-subspace ensemble of Fisher linear discriminants, with out-of-bag error.

Learner `l` draws its subspace and its bootstrap sample of training pairs from the
keyed stream (seed, ENSEMBLE_STREAM, l), so a model only depends on its seed and
training data, never on how many workers trained it.
"""

from dataclasses import dataclass, field
from functools import partial
from typing import List
import math
import warnings

import msgpack
import numpy as np

from ..prng import KeyedStream
from ..utils import makedirs_for, parallel_map
from .fld import DegenerateDataError, fld_classify, fld_train

ENSEMBLE_STREAM = 0xE5
MODEL_FORMAT = "wsnstego-ensemble-1"


@dataclass(frozen=True, eq=False)
class BaseLearner(object):
    subspace: np.ndarray  # sorted feature indices
    weights: np.ndarray
    bias: float
    in_bag: np.ndarray    # training pairs drawn into the bootstrap sample

    def classify(self, X):
        return fld_classify(self.weights, self.bias, np.asarray(X)[:, self.subspace])


@dataclass(frozen=True, eq=False)
class EnsembleModel(object):
    learners: List[BaseLearner]
    n_features: int
    d_sub: int
    seed: int
    n_train: int
    meta: dict = field(default_factory=dict)

    @property
    def n_learners(self):
        return len(self.learners)

    def votes(self, X):
        """(exemplars, learners) matrix of 0/1 decisions."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ValueError(f"model expects {self.n_features} features, got {X.shape[1]}")
        return np.column_stack([learner.classify(X) for learner in self.learners])

    def scores(self, X):
        """Fraction of learners voting stego."""
        return self.votes(X).mean(axis=1)

    def predict(self, X):
        """Majority vote; a tie is a cover."""
        return (self.votes(X).sum(axis=1) * 2 > self.n_learners).astype(np.uint8)

    def truncated(self, n_learners):
        return EnsembleModel(self.learners[:n_learners], self.n_features, self.d_sub,
                             self.seed, self.n_train, dict(self.meta))

    def save(self, path):
        makedirs_for(path)
        record = {
            "format": MODEL_FORMAT,
            "n_features": self.n_features,
            "d_sub": self.d_sub,
            "seed": self.seed,
            "n_train": self.n_train,
            "meta": self.meta,
            "learners": [{
                "subspace": learner.subspace.tolist(),
                "weights": learner.weights.tolist(),
                "bias": float(learner.bias),
                "in_bag": np.packbits(learner.in_bag).tobytes(),
            } for learner in self.learners],
        }
        with open(path, "wb") as fh:
            fh.write(msgpack.packb(record, use_bin_type=True))

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            record = msgpack.unpackb(fh.read(), raw=False)
        if record.get("format") != MODEL_FORMAT:
            raise ValueError(f"{path} is not a saved ensemble model")
        n_train = record["n_train"]
        learners = [BaseLearner(
            subspace=np.array(item["subspace"], dtype=np.int64),
            weights=np.array(item["weights"], dtype=float),
            bias=float(item["bias"]),
            in_bag=np.unpackbits(np.frombuffer(item["in_bag"], dtype=np.uint8),
                                 count=n_train).astype(bool),
        ) for item in record["learners"]]
        return cls(learners, record["n_features"], record["d_sub"], record["seed"],
                   n_train, record["meta"])


def default_d_sub(n_features):
    return int(math.ceil(n_features / 4))


def draw_learner(seed, index, n_features, d_sub, n_train):
    """Subspace and bootstrap sample of learner `index`."""
    stream = KeyedStream(seed, ENSEMBLE_STREAM, index)
    subspace = np.sort(stream.permutation(n_features)[:d_sub])
    sample = stream.integers(n_train, n_train)
    return subspace, sample


def _train_learner(index, covers, stegos, d_sub, seed):
    n_train, n_features = covers.shape
    subspace, sample = draw_learner(seed, index, n_features, d_sub, n_train)
    try:
        weights, bias = fld_train(covers[np.ix_(sample, subspace)], stegos[np.ix_(sample, subspace)])
    except DegenerateDataError:
        # nothing to separate in this subspace: the learner always says cover
        weights, bias = np.zeros(d_sub), 0.0
    in_bag = np.zeros(n_train, dtype=bool)
    in_bag[sample] = True
    return BaseLearner(subspace, weights, bias, in_bag)


def train_ensemble(covers, stegos, n_learners=100, d_sub=None, seed=0, ncpus=1):
    """Train `n_learners` FLDs on random subspaces and bootstrap samples of the pairs.

    :param covers: (N, d) cover features; row m pairs with row m of `stegos`
    :param d_sub: subspace dimension, ceil(d / 4) by default
    """
    covers = np.atleast_2d(np.asarray(covers, dtype=float))
    stegos = np.atleast_2d(np.asarray(stegos, dtype=float))
    if covers.shape != stegos.shape:
        raise ValueError(f"covers {covers.shape} and stegos {stegos.shape} aren't paired")
    n_train, n_features = covers.shape
    if n_train < 2:
        raise ValueError(f"need at least 2 training pairs, got {n_train}")
    if n_learners < 1:
        raise ValueError("need at least one learner")
    if d_sub is None or d_sub == 0:
        d_sub = default_d_sub(n_features)
    if not 1 <= d_sub <= n_features:
        raise ValueError(f"d_sub must be in [1, {n_features}], got {d_sub}")
    train = partial(_train_learner, covers=covers, stegos=stegos, d_sub=int(d_sub), seed=int(seed))
    learners = list(parallel_map(train, range(n_learners), ncpus=ncpus))
    return EnsembleModel(learners, n_features, int(d_sub), int(seed), n_train)


def out_of_bag_error(cover_votes, stego_votes):
    """E = (1 / 2N) sum_m [B(X_m) + 1 - B(Xbar_m)] for 0/1 decisions B (1 = stego)."""
    cover_votes = np.asarray(cover_votes, dtype=float)
    stego_votes = np.asarray(stego_votes, dtype=float)
    if cover_votes.shape != stego_votes.shape:
        raise ValueError("cover and stego decisions must be paired")
    n = len(cover_votes)
    if n == 0:
        return float("nan")
    return float((cover_votes.sum() + n - stego_votes.sum()) / (2 * n))


def _oob_tallies(model, covers, stegos):
    """Cumulative (over learners) out-of-bag stego votes and out-of-bag counts."""
    covers = np.atleast_2d(np.asarray(covers, dtype=float))
    stegos = np.atleast_2d(np.asarray(stegos, dtype=float))
    if len(covers) != model.n_train or len(stegos) != model.n_train:
        raise ValueError(f"model was trained on {model.n_train} pairs, got {len(covers)}")
    out_of_bag = np.array([~learner.in_bag for learner in model.learners])
    cover_votes = model.votes(covers).T.astype(np.int64) * out_of_bag
    stego_votes = model.votes(stegos).T.astype(np.int64) * out_of_bag
    return (np.cumsum(cover_votes, axis=0), np.cumsum(stego_votes, axis=0),
            np.cumsum(out_of_bag.astype(np.int64), axis=0))


def _oob_from_tallies(cover_votes, stego_votes, counts):
    valid = counts > 0
    if not valid.any():
        warnings.warn("no training pair was ever out of bag")
    # majority over out-of-bag learners, a tie is a cover
    cover_b = cover_votes[valid] * 2 > counts[valid]
    stego_b = stego_votes[valid] * 2 > counts[valid]
    return out_of_bag_error(cover_b, stego_b)


def oob_error(model, covers, stegos):
    """Out-of-bag error of `model` on the pairs it was trained on.

    Pairs that were in every learner's bootstrap sample are skipped.
    """
    cover_votes, stego_votes, counts = _oob_tallies(model, covers, stegos)
    return _oob_from_tallies(cover_votes[-1], stego_votes[-1], counts[-1])


def oob_curve(model, covers, stegos, step=5):
    """[(L, OOB error of the first L learners)] for L = step, 2 step, ..., and the full model."""
    cover_votes, stego_votes, counts = _oob_tallies(model, covers, stegos)
    sizes = list(range(step, model.n_learners + 1, step))
    if not sizes or sizes[-1] != model.n_learners:
        sizes.append(model.n_learners)
    return [(L, _oob_from_tallies(cover_votes[L - 1], stego_votes[L - 1], counts[L - 1]))
            for L in sizes]
