# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import numpy as np
import scipy.linalg

RIDGE = 1e-6


class DegenerateDataError(ValueError):
    pass


def _class_stats(X, name):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] < 2:
        raise ValueError(f"need at least 2 {name} exemplars, got {X.shape[0]}")
    return X.mean(axis=0), np.atleast_2d(np.cov(X, rowvar=False))


def fld_train(covers, stegos):
    """Fisher linear discriminant separating stego from cover.

    weights = (S_w + lambda I)^-1 (mu_stego - mu_cover), where S_w is the sum of
    the class covariances and lambda = 1e-6 trace(S_w) / d, or 1e-6 when every
    feature is constant within both classes. The bias puts the threshold halfway
    between the projected class means, so x is called stego iff weights.x + bias > 0.
    Raises DegenerateDataError if every exemplar of both classes is the same vector.
    """
    mu_c, cov_c = _class_stats(covers, "cover")
    mu_s, cov_s = _class_stats(stegos, "stego")
    if mu_c.shape != mu_s.shape:
        raise ValueError(f"covers have {mu_c.size} features, stegos {mu_s.size}")
    scatter = cov_c + cov_s
    d = len(mu_c)
    trace = np.trace(scatter)
    if trace == 0 and np.array_equal(mu_c, mu_s):
        raise DegenerateDataError("every cover and stego exemplar is the same vector")
    ridge = RIDGE * trace / d if trace > 0 else RIDGE
    weights = scipy.linalg.solve(scatter + ridge * np.eye(d), mu_s - mu_c, assume_a="sym")
    bias = -float(weights @ (mu_c + mu_s)) / 2.0
    return weights, bias


def fld_decision(weights, bias, X):
    return np.asarray(X, dtype=float) @ weights + bias


def fld_classify(weights, bias, X):
    """1 (stego) where the projection is above the threshold, else 0."""
    return (fld_decision(weights, bias, X) > 0).astype(np.uint8)
