# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from dataclasses import dataclass
import csv

import numpy as np

from ..imageio import raiseimageio
from ..utils import makedirs_for


@dataclass(frozen=True, eq=False)
class RocCurve(object):
    thresholds: np.ndarray  # +inf first, then distinct scores in decreasing order
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self):
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def trapezoid_auc(fpr, tpr):
    fpr = np.asarray(fpr, dtype=float)
    tpr = np.asarray(tpr, dtype=float)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def roc_curve(cover_scores, stego_scores):
    """ROC of the detector "stego iff score >= threshold".

    Thresholds sweep every distinct score from the highest down, so tied cover and
    stego scores move the curve diagonally in a single step.
    """
    cover = np.asarray(cover_scores, dtype=float).ravel()
    stego = np.asarray(stego_scores, dtype=float).ravel()
    if cover.size == 0 or stego.size == 0:
        raise ValueError("ROC needs at least one cover and one stego score")
    thresholds = np.unique(np.concatenate([cover, stego]))[::-1]
    # count of scores >= each threshold, via the sorted scores
    fp = cover.size - np.searchsorted(np.sort(cover), thresholds, side="left")
    tp = stego.size - np.searchsorted(np.sort(stego), thresholds, side="left")
    fpr = np.concatenate([[0.0], fp / cover.size])
    tpr = np.concatenate([[0.0], tp / stego.size])
    thresholds = np.concatenate([[np.inf], thresholds])
    return RocCurve(thresholds, fpr, tpr, trapezoid_auc(fpr, tpr))


@raiseimageio
def write_roc_csv(curve, path):
    makedirs_for(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["threshold", "fpr", "tpr"])
        for threshold, fpr, tpr in zip(curve.thresholds, curve.fpr, curve.tpr):
            writer.writerow([repr(float(threshold)), repr(float(fpr)), repr(float(tpr))])
