# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""The attack-and-detect experiment: simulate, attack, train and evaluate.

Every output file is named after its content only (tick, kind), and every value in
it is a function of the config, so reruns with the same config reproduce the same
bytes whatever the worker count.
"""

from os import path as op
import json
import os
import warnings

import numpy as np

from .attack import AttackSettings, attack_snapshot
from .config import MESSAGE_TAG, SPLIT_TAG
from .field import build_field, sense_snapshot
from .imageio import (read_snapshot_csv, render_gray, write_deltas_csv, write_pgm,
                      write_snapshot_csv)
from .pipeline import Exemplar, dataset_pipeline
from .prng import KeyedStream, derive_seed
from .steganalysis import (COVER, STEGO, default_d_sub, feature_matrix, lsb_enhance,
                           oob_curve, oob_error, read_features_csv, roc_curve, train_ensemble,
                           write_features_csv, write_roc_csv)
from .stego import StegoKey
from .utils import bytes_to_bits, makedirs_for, read_csv, write_csv

SNAPSHOT_ATTACK_TAG = 0xA7


def output_path(config, name):
    return op.join(config.out, name)


def _exists(config, *names):
    return config.resume and all(op.exists(output_path(config, n)) for n in names)


def base_snapshot(config, tick):
    """The experiment's own field at `tick`, as simulated for the sink."""
    field = build_field(config.field)
    return field, sense_snapshot(field, tick, config.noise_seed)


def cmd_simulate(config):
    """Write snapshot_tNNNN.{pgm,csv} for every tick; returns the PGM paths."""
    paths = []
    for tick in config.ticks:
        pgm = output_path(config, f"snapshot_t{tick:04d}.pgm")
        csvpath = output_path(config, f"snapshot_t{tick:04d}.csv")
        paths.append(pgm)
        if _exists(config, pgm, csvpath):
            continue
        field, snapshot = base_snapshot(config, tick)
        write_pgm(render_gray(snapshot, field), pgm)
        write_snapshot_csv(snapshot, field, csvpath)
    return paths


def attack_message_key(config, tick):
    return StegoKey(derive_seed(config.seed, MESSAGE_TAG, SNAPSHOT_ATTACK_TAG, tick))


def cmd_attack(config, tick=None, snapshot=None, message=None):
    """Attack one snapshot; writes the attacked image, readings, sensor deltas and report.

    The snapshot defaults to the experiment's field at `tick` (the first tick if not
    given); a snapshot CSV written by `cmd_simulate` is used when present.

    :param message: bytes to hide, least significant bit first; a keyed random
                    message filling the configured rate when None
    """
    if tick is None:
        if snapshot is not None:
            tick = snapshot.time
        elif config.ticks:
            tick = config.ticks[0]
        else:
            raise ValueError("no tick to attack")
    field = build_field(config.field)
    if snapshot is None:
        csvpath = output_path(config, f"snapshot_t{tick:04d}.csv")
        if op.exists(csvpath):
            snapshot = read_snapshot_csv(csvpath, tick)
        else:
            _, snapshot = base_snapshot(config, tick)

    bits = None if message is None else bytes_to_bits(message)
    result = attack_snapshot(snapshot, field, AttackSettings.from_config(config),
                             config.stego_key, attack_message_key(config, tick), bits)
    write_pgm(result.stego_gray, output_path(config, f"attacked_t{tick:04d}.pgm"))
    write_pgm(lsb_enhance(result.stego_gray), output_path(config, f"attacked_lsb_t{tick:04d}.pgm"))
    write_snapshot_csv(result.snapshot, field, output_path(config, f"attacked_t{tick:04d}.csv"))
    write_deltas_csv(result.deltas, snapshot, output_path(config, f"deltas_t{tick:04d}.csv"))
    with open(output_path(config, f"attack_report_t{tick:04d}.json"), "w") as fh:
        fh.write(result.report.to_json() + "\n")
    return result


def _attack_all(config):
    """Attack every tick; EmbedReports go to attack_reports.jsonl."""
    reports_path = output_path(config, "attack_reports.jsonl")
    makedirs_for(reports_path)
    if op.exists(reports_path):
        os.unlink(reports_path)
    reports = []
    for tick in config.ticks:
        result = cmd_attack(config, tick)
        result.report.append_jsonl(reports_path, tick=tick)
        reports.append(result.report)
    return reports


##########################################################################################
#                                  Dataset and training                                  #
##########################################################################################

CLASSIC_FIELDS = ["exemplar", "label", "close_pairs", "rqp"]


def build_dataset(config, progress=True):
    """Cover/stego features and classic detector scores of every valid exemplar pair.

    Returns (cover vectors, stego vectors, classic score rows, number of failures).
    """
    features_path = output_path(config, "features.csv")
    classic_path = output_path(config, "classic_scores.csv")
    if _exists(config, features_path, classic_path):
        vectors = read_features_csv(features_path)
        covers = [v for v in vectors if v.label == COVER]
        stegos = [v for v in vectors if v.label == STEGO]
        rows = read_csv(classic_path)
        return covers, stegos, rows, config.pairs - len(covers)

    pipe = dataset_pipeline(config)
    exemplars = (Exemplar.for_index(config, m) for m in range(config.pairs))
    covers, stegos, rows = [], [], []
    failures = 0
    try:
        for exemplar in pipe.process(exemplars, ncpus=config.workers, progress=progress):
            if exemplar.failed:
                failures += 1
                continue
            covers.append(exemplar.cover_features)
            stegos.append(exemplar.stego_features)
            for label, name in ((COVER, "cover"), (STEGO, "stego")):
                scores = exemplar.scores[name]
                rows.append({"exemplar": f"{exemplar.name}/{name}", "label": label,
                             "close_pairs": scores["close_pairs"], "rqp": scores["rqp"]})
    finally:
        pipe.finish()
        pipe.report.save(output_path(config, "exemplars.tsv"))

    write_features_csv([v for pair in zip(covers, stegos) for v in pair], features_path)
    write_csv(classic_path, CLASSIC_FIELDS, ([r[f] for f in CLASSIC_FIELDS] for r in rows))
    return covers, stegos, rows, failures


def split_pairs(n_pairs, train_fraction, seed):
    """Keyed (train, test) index split of the pairs."""
    if n_pairs < 3:
        raise ValueError(f"insufficient data: {n_pairs} valid cover/stego pairs")
    order = KeyedStream(seed, SPLIT_TAG).permutation(n_pairs)
    n_train = min(max(2, int(round(train_fraction * n_pairs))), n_pairs - 1)
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def subspace_sweep_values(n_features):
    return sorted({max(1, n_features // 16), max(1, n_features // 8), default_d_sub(n_features),
                   max(1, n_features // 2), n_features})


def _classic_rocs(rows, test_names):
    by_label = {COVER: {}, STEGO: {}}
    for row in rows:
        name = row["exemplar"].split("/")[0]
        if name in test_names:
            by_label[int(row["label"])][name] = row
    names = sorted(by_label[COVER])
    curves = {}
    for detector in ("close_pairs", "rqp"):
        curves[detector] = roc_curve([float(by_label[COVER][n][detector]) for n in names],
                                     [float(by_label[STEGO][n][detector]) for n in names])
    return curves


def cmd_train_eval(config, progress=True):
    """Train the ensemble on the training pairs and evaluate it on the rest.

    Writes the model, the ROC of the ensemble and of the classic detectors, the OOB
    error against the number of learners and the subspace dimension sweep.
    """
    covers, stegos, rows, failures = build_dataset(config, progress=progress)
    if len(covers) != len(stegos) or not stegos:
        raise ValueError(f"insufficient data: {len(covers)} cover and {len(stegos)} stego exemplars")
    if failures:
        warnings.warn(f"{failures} of {config.pairs} exemplars failed and were left out")
    X_cover = feature_matrix(covers)
    X_stego = feature_matrix(stegos)
    train, test = split_pairs(len(covers), config.train_fraction, config.seed)

    model = train_ensemble(X_cover[train], X_stego[train], n_learners=config.learners,
                           d_sub=config.subspace or None, seed=config.classifier_seed,
                           ncpus=config.workers)
    model.meta.update(config_hash=config.config_hash, algorithm=config.algorithm,
                      rate=config.rate)
    model.save(output_path(config, "model.msgpack"))

    oob = oob_error(model, X_cover[train], X_stego[train])
    curve = oob_curve(model, X_cover[train], X_stego[train], step=config.oob_step)
    write_csv(output_path(config, "oob_curve.csv"), ["learners", "oob"], curve)

    roc = roc_curve(model.scores(X_cover[test]), model.scores(X_stego[test]))
    write_roc_csv(roc, output_path(config, "roc.csv"))

    sweep = []
    for d_sub in subspace_sweep_values(model.n_features):
        if d_sub == model.d_sub:
            swept = model
        else:
            swept = train_ensemble(X_cover[train], X_stego[train], n_learners=config.learners,
                                   d_sub=d_sub, seed=config.classifier_seed, ncpus=config.workers)
        sweep.append((d_sub, oob_error(swept, X_cover[train], X_stego[train]),
                      roc_curve(swept.scores(X_cover[test]), swept.scores(X_stego[test])).auc))
    write_csv(output_path(config, "subspace_sweep.csv"), ["d_sub", "oob", "auc"], sweep)

    test_names = {covers[i].name.split("/")[0] for i in test}
    classic = _classic_rocs(rows, test_names)
    write_roc_csv(classic["close_pairs"], output_path(config, "roc_close_pairs.csv"))
    write_roc_csv(classic["rqp"], output_path(config, "roc_rqp.csv"))

    return {
        "auc": roc.auc,
        "oob": oob,
        "auc_close_pairs": classic["close_pairs"].auc,
        "auc_rqp": classic["rqp"].auc,
        "n_train": int(len(train)),
        "n_test": int(len(test)),
        "n_features": model.n_features,
        "d_sub": model.d_sub,
        "learners": model.n_learners,
        "failed_exemplars": int(failures),
        "dataset_achieved_rate": _mean_dataset_rate(config),
    }


def _mean_dataset_rate(config):
    path = output_path(config, "exemplars.tsv")
    if not op.exists(path):
        return None
    rates = [float(r["AchievedRate"]) for r in read_csv(path, dialect="tsv")
             if r.get("AchievedRate") not in (None, "", "NA")]
    return float(np.mean(rates)) if rates else None


def cmd_experiment(config, progress=True):
    """simulate, attack every tick, train and evaluate; writes summary.json."""
    if not config.ticks:
        raise ValueError("the experiment needs at least one tick")
    cmd_simulate(config)
    reports = _attack_all(config)
    results = cmd_train_eval(config, progress=progress)
    summary = dict(results)
    summary.update(
        config_hash=config.config_hash,
        seed=config.seed,
        algorithm=config.algorithm,
        rate=config.rate,
        achieved_rate=float(np.mean([r.achieved_rate for r in reports])),
        change_counts={
            "coefficients_changed": sum(r.coefficients_changed for r in reports),
            "shrinkage_events": sum(r.shrinkage_events for r in reports),
            "sensors_changed": sum(r.extra["sensors_changed"] for r in reports),
            "pixels_changed": sum(r.extra["pixels_changed"] for r in reports),
        },
    )
    path = output_path(config, "summary.json")
    makedirs_for(path)
    with open(path, "w") as fh:
        json.dump(summary, fh, sort_keys=True)
        fh.write("\n")
    return summary
