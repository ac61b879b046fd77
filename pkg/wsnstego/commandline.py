# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from functools import wraps
import sys

import click
from click import Path

from .config import ConfigError, load_config
from .experiment import cmd_attack, cmd_experiment, cmd_simulate, cmd_train_eval
from .stego import StegoError
from .utils import CatchSignalThenExit


def config_options(func):
    """--config and the keys most often changed from the command line."""
    @click.option("--config", "-c", "config_path", default=None,
                  type=Path(exists=True, dir_okay=False),
                  help="Experiment config file (key = value lines)")
    @click.option("--seed", default=None, type=int,
                  help="Master seed; overrides the config file")
    @click.option("--out", "-o", default=None, type=Path(file_okay=False),
                  help="Output directory")
    @click.option("--workers", "-j", default=None, type=int,
                  help="Number of parallel workers")
    @click.option("--resume/--no-resume", default=None,
                  help="Reuse outputs already present in the output directory")
    @wraps(func)
    def wrapper(config_path, seed, out, workers, resume, **kwargs):
        try:
            config = load_config(config_path, seed=seed, out=out, workers=workers, resume=resume)
        except (ConfigError, OSError) as exc:
            click.echo(f"ERROR: {exc}", err=True)
            sys.exit(2)
        try:
            with CatchSignalThenExit():
                return func(config, **kwargs)
        except (StegoError, ValueError) as exc:
            click.echo(f"ERROR: {exc}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
def wstk_main():
    pass


@wstk_main.command()
@config_options
def simulate(config):
    """Render the configured field at every tick to PGM and CSV."""
    paths = cmd_simulate(config)
    click.echo(f"Simulated {len(paths)} snapshots into {config.out}")


@wstk_main.command()
@click.option("--tick", "-t", default=None, type=int,
              help="Tick to attack (default: the first configured tick)")
@click.option("--message", "-m", "message_file", default=None,
              type=click.File("rb"),
              help="File whose bytes are hidden (default: a keyed random message)")
@config_options
def attack(config, tick, message_file):
    """Embed a message into one snapshot and write the sensor edits."""
    message = None if message_file is None else message_file.read()
    result = cmd_attack(config, tick, message=message)
    report = result.report
    click.echo(f"{report.algorithm}: {report.bits_embedded} bits, "
               f"{report.coefficients_changed} changes, "
               f"{report.extra['sensors_changed']} sensors edited, "
               f"achieved rate {report.achieved_rate:.4f}")


@wstk_main.command("train-eval")
@config_options
def train_eval(config):
    """Build the cover/stego dataset, train the ensemble and evaluate it."""
    results = cmd_train_eval(config)
    click.echo(f"AUC {results['auc']:.4f}, OOB error {results['oob']:.4f} "
               f"({results['n_train']} training pairs, {results['n_test']} test pairs)")


@wstk_main.command()
@config_options
def experiment(config):
    """simulate, attack and train-eval in one run; writes summary.json."""
    summary = cmd_experiment(config)
    click.echo(f"Experiment {summary['config_hash']}: AUC {summary['auc']:.4f}, "
               f"OOB error {summary['oob']:.4f}, "
               f"close pairs AUC {summary['auc_close_pairs']:.4f}, "
               f"RQP AUC {summary['auc_rqp']:.4f}")


if __name__ == "__main__":
    wstk_main()
