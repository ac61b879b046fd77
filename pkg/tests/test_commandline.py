from wsnstego.commandline import wstk_main
from wsnstego.config import load_config
from wsnstego.imageio import read_pgm
from wsnstego.stego import lsb_replace_extract
from wsnstego.utils import bits_to_bytes

from .utils import *

import json
import os.path as op

from click.testing import CliRunner


SMALL_CONFIG_FILE = """\
# tiny field so the whole run takes seconds
seed = 11
side_length = 32
zone_counts = 3, 3, 2
ticks = 50, 100
pairs = 12
fields = 3
learners = 10
"""


def write_config(tmpdir, text=SMALL_CONFIG_FILE):
    path = tmpdir.join("experiment.cfg")
    path.write(text)
    return str(path)


def test_simulate_command(tmpdir):
    out = str(tmpdir.join("out"))
    result = CliRunner().invoke(wstk_main, ["simulate", "-c", write_config(tmpdir), "-o", out])
    assert result.exit_code == 0, result.output
    assert op.exists(op.join(out, "snapshot_t0050.pgm"))
    assert op.exists(op.join(out, "snapshot_t0100.csv"))
    assert "Simulated 2 snapshots" in result.output


def test_attack_command(tmpdir):
    out = str(tmpdir.join("out"))
    result = CliRunner().invoke(wstk_main, ["attack", "-c", write_config(tmpdir), "-o", out,
                                            "--tick", "100"])
    assert result.exit_code == 0, result.output
    assert op.exists(op.join(out, "deltas_t0100.csv"))
    assert "nsf5:" in result.output


def test_experiment_command(tmpdir):
    out = str(tmpdir.join("out"))
    result = CliRunner().invoke(wstk_main, ["experiment", "-c", write_config(tmpdir), "-o", out,
                                            "--seed", "12"])
    assert result.exit_code == 0, result.output
    with open(op.join(out, "summary.json")) as fh:
        assert json.load(fh)["seed"] == 12


def test_bad_config(tmpdir):
    runner = CliRunner()
    result = runner.invoke(wstk_main, ["simulate", "-c", write_config(tmpdir, "rate = 2\n")])
    assert result.exit_code == 2
    result = runner.invoke(wstk_main, ["simulate", "-c", write_config(tmpdir, "colour = red\n")])
    assert result.exit_code == 2
    result = runner.invoke(wstk_main, ["simulate", "-c", str(tmpdir.join("missing.cfg"))])
    assert result.exit_code == 2


def test_attack_without_ticks(tmpdir):
    config = write_config(tmpdir, "ticks =\n")
    result = CliRunner().invoke(wstk_main, ["attack", "-c", config, "-o", str(tmpdir)])
    assert result.exit_code == 1


def test_attack_message_file(tmpdir):
    data = b"WSN\x00\xff"
    message = tmpdir.join("message.bin")
    message.write_binary(data)
    config = write_config(tmpdir, SMALL_CONFIG_FILE + "algorithm = lsb\nrate = 1.0\n")
    out = str(tmpdir.join("out"))
    result = CliRunner().invoke(wstk_main, ["attack", "-c", config, "-o", out, "-t", "50",
                                            "--message", str(message)])
    assert result.exit_code == 0, result.output
    assert f"lsb: {8 * len(data)} bits" in result.output
    attacked = read_pgm(op.join(out, "attacked_t0050.pgm"))
    bits = lsb_replace_extract(attacked, load_config(config).stego_key, 8 * len(data))
    assert bits_to_bytes(bits) == data


def test_attack_message_too_long(tmpdir):
    message = tmpdir.join("message.bin")
    message.write_binary(bytes(range(256)))
    result = CliRunner().invoke(wstk_main, ["attack", "-c", write_config(tmpdir),
                                            "-o", str(tmpdir.join("out")),
                                            "--message", str(message)])
    assert result.exit_code == 1
    assert "ERROR" in result.output
