from wsnstego.field import *

from dataclasses import replace

from .data import *
from .utils import *

import numpy as np
import pytest


def test_full_size_field():
    config = FieldConfig(**FULL_FIELD)
    field = build_field(config)
    assert field.n_zones == 100
    assert field.shape == (256, 256)
    targets = modality_targets(config.n_sensors, config.modality_fractions)
    assert targets.tolist() == [32768, 26214, 6554]
    assert field.modality_counts().tolist() == targets.tolist()


def test_minimal_field():
    field = build_field(FieldConfig(side_length=8, zone_counts=(1, 1, 1), seed=0))
    assert field.n_zones == 3
    assert set(np.unique(field.modality).tolist()) <= {0, 1, 2}
    assert set(np.unique(field.zone_id).tolist()) == {0, 1, 2}
    assert sum(1 for _ in field) == 64


def test_field_determinism(small_field_config):
    first = build_field(small_field_config)
    build_field.cache_clear()
    second = build_field(small_field_config)
    assert first is not second
    for name in ("modality", "zone_id", "zone_centres", "zone_modality"):
        assert np.array_equal(getattr(first, name), getattr(second, name))
    other = build_field(small_field_config.with_seed(4))
    assert not np.array_equal(first.zone_centres, other.zone_centres)


def test_zones_are_homogeneous(small_field_config):
    field = build_field(small_field_config)
    # every sensor has its zone's modality, and each centre belongs to its own zone
    assert np.array_equal(field.zone_modality[field.zone_id], field.modality)
    for zone, (x, y) in enumerate(field.zone_centres):
        assert field.zone_id[y, x] == zone
        sensor = field.sensor((x, y))
        assert sensor.zone_id == zone
        assert sensor.modality == field.zone_modality[zone]
    assert field.zone_modality.tolist() == [0] * 4 + [1] * 3 + [2] * 2


def test_field_is_immutable(small_field_config):
    field = build_field(small_field_config)
    with pytest.raises(ValueError):
        field.modality[0, 0] = 1


def test_modality_targets():
    assert modality_targets(10, (0.5, 0.4, 0.1)).tolist() == [5, 4, 1]
    counts = modality_targets(101, (1 / 3, 1 / 3, 1 / 3))
    assert counts.sum() == 101
    assert counts.tolist() == [34, 34, 33]


def test_config_validation():
    FieldConfig().validate()
    bad = [
        dict(side_length=4),
        dict(zone_counts=(0, 1, 1)),
        dict(modality_fractions=(0.5, 0.5, 0.5)),
        dict(std_dev=-1.0),
        dict(side_length=8, zone_counts=(1, 1, 10)),
    ]
    for kwargs in bad:
        with pytest.raises(FieldConfigError):
            FieldConfig(**kwargs).validate()
    with pytest.raises(FieldConfigError):
        build_field(FieldConfig(side_length=4))


def test_modality_mean():
    config = FieldConfig()
    for modality in Modality:
        assert modality_mean(config, modality, 0.7, 0) == pytest.approx(40.0)
    assert modality_mean(config, Modality.TEMPERATURE, 1.0, 100) == \
        pytest.approx(TEMPERATURE_MEAN_R1_T100)
    assert modality_mean(config, Modality.PRESSURE, 0.0, 100) == pytest.approx(40.0)


def test_sense_snapshot(small_field_config):
    field = build_field(small_field_config)
    a = sense_snapshot(field, 50, noise_seed=11)
    b = sense_snapshot(field, 50, noise_seed=11)
    assert a.time == 50
    assert np.array_equal(a.readings, b.readings)
    assert not np.array_equal(a.readings, sense_snapshot(field, 50, noise_seed=12).readings)
    assert not np.array_equal(a.readings, sense_snapshot(field, 51, noise_seed=11).readings)

    for position in [(0, 0), (31, 0), (5, 17), (31, 31)]:
        x, y = position
        assert sense_sensor(field, 50, 11, position) == pytest.approx(a.readings[y, x], rel=1e-12)

    with pytest.raises(ValueError):
        a.readings[0, 0] = 1.0
    with pytest.raises(ValueError):
        sense_snapshot(field, -1, 11)


def test_snapshot_means(small_field_config):
    field = build_field(replace(small_field_config, std_dev=0.0))
    snapshot = sense_snapshot(field, 100, noise_seed=1)
    assert np.allclose(snapshot.readings, analytic_means(field, 100))
    # one mean per zone
    for zone in range(field.n_zones):
        assert len(np.unique(snapshot.readings[field.zone_id == zone])) == 1
    assert np.allclose(sense_snapshot(field, 0, 1).readings, 40.0)


def test_apply_attack(small_field_config):
    field = build_field(small_field_config)
    snapshot = sense_snapshot(field, 50, 1)

    same = apply_attack(snapshot, [])
    assert np.array_equal(same.readings, snapshot.readings)
    assert same is not snapshot

    changed = apply_attack(snapshot, [((0, 0), 99.0)])
    assert np.count_nonzero(changed.readings != snapshot.readings) == 1
    assert changed.readings[0, 0] == 99.0
    assert changed.time == snapshot.time

    with pytest.raises(AttackError):
        apply_attack(snapshot, [((32, 0), 1.0)])
    with pytest.raises(AttackError):
        apply_attack(snapshot, [((0, -1), 1.0)])


def test_modality_labels():
    assert Modality.TEMPERATURE.label == "temperature"
    assert Modality.from_label(" Humidity") is Modality.HUMIDITY


def test_sensor_mean():
    field = build_field(FieldConfig(side_length=8, zone_counts=(1, 1, 1), seed=0))
    mean = analytic_means(field, 80)[4, 3]
    draws = np.array([sense_sensor(field, 80, seed, (3, 4)) for seed in range(10000)])
    assert abs(draws.mean() - mean) <= 3 * 5 / np.sqrt(10000)
    assert draws.std() == pytest.approx(5.0, rel=0.05)
