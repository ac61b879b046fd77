# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.


from wsnstego.config import ExperimentConfig, load_config
from wsnstego.field import FieldConfig, SensorField, Snapshot, build_field, sense_snapshot
from wsnstego.imageio import GrayImage, render_gray
from wsnstego.dct import DctPlane, forward, inverse

__version__ = "0.1.0"

__all__ = [
    'ExperimentConfig',
    'load_config',
    'FieldConfig',
    'SensorField',
    'Snapshot',
    'build_field',
    'sense_snapshot',
    'GrayImage',
    'render_gray',
    'DctPlane',
    'forward',
    'inverse',
]
