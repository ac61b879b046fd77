# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

"""Experiment configuration: a flat `key = value` file.

```
# full-size run
seed = 1
side_length = 256
zone_counts = 50, 40, 10
ticks = 50, 75, 90, 100
algorithm = nsf5
rate = 0.1
```

`#` starts a comment, blank lines are ignored, tuples are comma separated. Keys not
given keep their defaults; unknown keys are errors.
"""

from dataclasses import dataclass, field as dc_field, fields, replace
from typing import Tuple
import hashlib

from .field import FieldConfig, FieldConfigError
from .prng import derive_seed
from .stego import StegoKey

ALGORITHMS = ("nsf5", "f5", "lsb")

# derived seed tags
NOISE_TAG = 1
KEY_TAG = 2
MESSAGE_TAG = 3
CLASSIFIER_TAG = 4
SPLIT_TAG = 5
DATASET_FIELD_TAG = 6
RQP_TAG = 7

FIELD_KEYS = ("seed", "side_length", "zone_counts", "modality_fractions", "drift_rates",
              "base_mean", "std_dev")


class ConfigError(ValueError):
    pass


def _tuple_of(kind):
    def parse(text):
        return tuple(kind(v) for v in text.replace(",", " ").split())
    return parse


def _bool(text):
    text = text.strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ExperimentConfig(object):
    field: FieldConfig = dc_field(default_factory=FieldConfig)
    ticks: Tuple[int, ...] = (50, 75, 90, 100)
    quality: int = 80
    algorithm: str = "nsf5"
    rate: float = 0.1
    block_size: int = 128
    f5_p: int = 0
    learners: int = 100
    subspace: int = 0
    train_fraction: float = 0.5
    pairs: int = 400
    fields: int = 20
    rqp_fraction: float = 0.5
    oob_step: int = 5
    # not part of the config hash
    out: str = "wsnstego_out"
    workers: int = 1
    resume: bool = False

    PARSERS = {
        "seed": int,
        "side_length": int,
        "zone_counts": _tuple_of(int),
        "modality_fractions": _tuple_of(float),
        "drift_rates": _tuple_of(float),
        "base_mean": float,
        "std_dev": float,
        "ticks": _tuple_of(int),
        "quality": int,
        "algorithm": str.lower,
        "rate": float,
        "block_size": int,
        "f5_p": int,
        "learners": int,
        "subspace": int,
        "train_fraction": float,
        "pairs": int,
        "fields": int,
        "rqp_fraction": float,
        "oob_step": int,
        "out": str,
        "workers": int,
        "resume": _bool,
    }
    UNHASHED = ("out", "workers", "resume")

    @property
    def seed(self):
        return self.field.seed

    @property
    def noise_seed(self):
        return derive_seed(self.seed, NOISE_TAG)

    @property
    def stego_key(self):
        return StegoKey(derive_seed(self.seed, KEY_TAG))

    @property
    def classifier_seed(self):
        return derive_seed(self.seed, CLASSIFIER_TAG)

    def validate(self):
        try:
            self.field.validate()
        except FieldConfigError as exc:
            raise ConfigError(str(exc)) from exc
        if any(t < 0 for t in self.ticks):
            raise ConfigError(f"ticks must be non-negative, got {self.ticks}")
        if not 1 <= self.quality <= 100:
            raise ConfigError(f"quality must be in [1, 100], got {self.quality}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}")
        if not 0 <= self.rate <= 1:
            raise ConfigError(f"rate must be in [0, 1], got {self.rate}")
        if self.block_size < 1 or self.f5_p < 0 or self.subspace < 0:
            raise ConfigError("block_size must be positive, f5_p and subspace non-negative")
        if self.learners < 1:
            raise ConfigError(f"learners must be at least 1, got {self.learners}")
        if not 0 < self.train_fraction < 1:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.pairs < 10:
            raise ConfigError(f"need at least 10 cover/stego pairs, got {self.pairs}")
        if self.fields < 1 or self.oob_step < 1 or self.workers < 1:
            raise ConfigError("fields, oob_step and workers must be positive")
        if not 0.01 <= self.rqp_fraction <= 1:
            raise ConfigError(f"rqp_fraction must be in [0.01, 1], got {self.rqp_fraction}")
        return self

    def items(self):
        """(key, value) for every key, in file order."""
        for key in FIELD_KEYS:
            yield key, getattr(self.field, key)
        for f in fields(self):
            if f.name != "field":
                yield f.name, getattr(self, f.name)

    def dumps(self, hashed_only=False):
        lines = []
        for key, value in self.items():
            if hashed_only and key in self.UNHASHED:
                continue
            if isinstance(value, tuple):
                value = ", ".join(repr(v) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            elif isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    @property
    def config_hash(self):
        return hashlib.sha256(self.dumps(hashed_only=True).encode("utf-8")).hexdigest()[:16]

    def override(self, **values):
        """Copy with the given keys replaced; `None` values are ignored."""
        values = {k: v for k, v in values.items() if v is not None}
        unknown = set(values) - set(self.PARSERS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        field_values = {k: values.pop(k) for k in list(values) if k in FIELD_KEYS}
        for key in ("zone_counts", "modality_fractions", "drift_rates"):
            if key in field_values:
                field_values[key] = tuple(field_values[key])
        if "ticks" in values:
            values["ticks"] = tuple(values["ticks"])
        return replace(self, field=replace(self.field, **field_values), **values)


def parse_config(text, source="<config>"):
    """Parse `key = value` lines into a dict of typed values."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ExperimentConfig.PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = ExperimentConfig.PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def load_config(path=None, **overrides):
    """Defaults, then the config file at `path` (if any), then `overrides`."""
    values = {}
    if path is not None:
        with open(path) as fh:
            values = parse_config(fh.read(), source=str(path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig().override(**values).validate()
