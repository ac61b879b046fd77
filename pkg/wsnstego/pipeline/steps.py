# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Per-exemplar steps of the cover/stego dataset.

Exemplar `m` is one sensor field, one tick and one message: the cover is the field's
snapshot as the sink renders it, the stego the same snapshot after the attack.
"""

from dataclasses import dataclass, field as dc_field
from typing import Optional

from ..attack import AttackSettings, attack_snapshot
from ..config import DATASET_FIELD_TAG, MESSAGE_TAG, NOISE_TAG, RQP_TAG
from ..dct import forward
from ..field import FieldConfig, build_field, sense_snapshot
from ..prng import derive_seed
from ..steganalysis import COVER, STEGO, FeatureVector, close_pairs_score, extract_features, rqp_score
from ..stego import StegoKey
from .base import ExperimentPipeline, PipelineStep


@dataclass
class Exemplar(object):
    index: int
    field_config: FieldConfig
    tick: int
    noise_seed: int
    message_seed: int
    report: dict = dc_field(default_factory=dict)
    failed: bool = False
    snapshot: object = None
    sensor_field: object = None
    attack: object = None
    cover_features: Optional[FeatureVector] = None
    stego_features: Optional[FeatureVector] = None
    scores: dict = dc_field(default_factory=dict)

    @property
    def name(self):
        return f"m{self.index:05d}"

    @classmethod
    def for_index(cls, config, index):
        """Exemplar `index` of the dataset described by an ExperimentConfig."""
        if not config.ticks:
            raise ValueError("the dataset needs at least one tick")
        field_seed = derive_seed(config.seed, DATASET_FIELD_TAG, index % config.fields)
        tick = config.ticks[(index // config.fields) % len(config.ticks)]
        return cls(index=index,
                   field_config=config.field.with_seed(field_seed),
                   tick=tick,
                   noise_seed=derive_seed(config.seed, NOISE_TAG, index),
                   message_seed=derive_seed(config.seed, MESSAGE_TAG, index))


class SimulateStep(PipelineStep):
    def process_exemplar(self, exemplar):
        exemplar.sensor_field = build_field(exemplar.field_config)
        exemplar.snapshot = sense_snapshot(exemplar.sensor_field, exemplar.tick, exemplar.noise_seed)
        exemplar.report.update(Tick=exemplar.tick, FieldSeed=exemplar.field_config.seed)
        return exemplar


class AttackStep(PipelineStep):
    def __init__(self, settings, key):
        self.settings = settings
        self.key = key

    @classmethod
    def from_config(cls, config):
        return cls(AttackSettings.from_config(config), config.stego_key)

    def process_exemplar(self, exemplar):
        exemplar.attack = attack_snapshot(exemplar.snapshot, exemplar.sensor_field, self.settings,
                                          self.key, StegoKey(exemplar.message_seed))
        report = exemplar.attack.report
        exemplar.report.update(BitsEmbedded=report.bits_embedded,
                               AchievedRate=report.achieved_rate,
                               CoefficientsChanged=report.coefficients_changed,
                               ShrinkageEvents=report.shrinkage_events,
                               SensorsChanged=report.extra["sensors_changed"],
                               PixelsChanged=report.extra["pixels_changed"])
        return exemplar


class FeatureStep(PipelineStep):
    """Sink-side features of the cover and stego renderings."""

    def __init__(self, quality):
        self.quality = quality

    def process_exemplar(self, exemplar):
        attack = exemplar.attack
        exemplar.cover_features = extract_features(forward(attack.cover_gray, self.quality),
                                                   COVER, f"{exemplar.name}/cover")
        exemplar.stego_features = extract_features(forward(attack.stego_gray, self.quality),
                                                   STEGO, f"{exemplar.name}/stego")
        return exemplar


class ClassicScoresStep(PipelineStep):
    """Close color pairs and RQP scores of the cover and stego renderings."""

    def __init__(self, seed, rqp_fraction=0.5):
        self.seed = seed
        self.rqp_fraction = rqp_fraction

    def process_exemplar(self, exemplar):
        attack = exemplar.attack
        key = StegoKey(derive_seed(self.seed, RQP_TAG, exemplar.index))
        for label, image in (("cover", attack.cover_gray), ("stego", attack.stego_gray)):
            exemplar.scores[label] = {
                "close_pairs": close_pairs_score(image),
                "rqp": rqp_score(image, key, self.rqp_fraction),
            }
        return exemplar


class ReleaseStep(PipelineStep):
    """Drop snapshots and images once features are computed."""

    def process_exemplar(self, exemplar):
        exemplar.snapshot = None
        exemplar.sensor_field = None
        exemplar.attack = None
        return exemplar


def dataset_pipeline(config):
    return ExperimentPipeline(
        SimulateStep(),
        AttackStep.from_config(config),
        FeatureStep(config.quality),
        ClassicScoresStep(config.seed, config.rqp_fraction),
        ReleaseStep(),
    )
