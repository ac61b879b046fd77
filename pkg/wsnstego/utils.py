# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from signal import SIGABRT, SIGINT, SIGTERM, SIGHUP, signal
import csv
import os
import sys

import numpy as np


def round_half_away(values):
    """Round to nearest integer, halves away from zero (C `round()` semantics).

    numpy's `np.round` rounds halves to even, which is not what JPEG codecs do.
    """
    values = np.asarray(values, dtype=float)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def bytes_to_bits(data):
    """Unpack bytes to a uint8 bit vector, least significant bit first."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8), bitorder="little")


def bits_to_bytes(bits):
    """Inverse of `bytes_to_bits`; a trailing partial byte is zero padded."""
    bits = np.asarray(bits, dtype=np.uint8)
    return np.packbits(bits, bitorder="little").tobytes()


def as_bits(bits):
    """Validate and normalise a message bit vector."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size and bits.max() > 1:
        raise ValueError("message must contain only 0/1 bits")
    return bits


def parallel_map(func, items, ncpus=1):
    """Ordered map of `func` over `items`, in threads or processes.

    Results come back in input order whatever the worker count, so anything
    computed downstream doesn't depend on `ncpus`.
    """
    from concurrent.futures import ThreadPoolExecutor, ProcessPoolExecutor
    if ncpus > 1:
        executor = ProcessPoolExecutor(max_workers=ncpus)
    else:
        executor = ThreadPoolExecutor(max_workers=1)
    with executor:
        yield from executor.map(func, items)


def makedirs_for(path):
    dirname = os.path.dirname(str(path))
    if dirname:
        os.makedirs(dirname, exist_ok=True)


def write_csv(path, header, rows):
    """Plain CSV with a header row; floats written with `repr` so they round-trip."""
    makedirs_for(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                             for v in row])


def read_csv(path, **kwargs):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh, **kwargs))


class CatchSignalThenExit(object):
    """Context manager to catch any signals, then exit.

    ```
    with CatchSignalThenExit(exit=True, returncode=1):
        write_outputs()
    ```

    If the program receives some signal (SIG{ABRT,INT,TERM,HUP}) during the body of
    the with statement, exit with status `returncode` once the body has finished, so
    output files are never left half written.
    """

    def __init__(self, signals=(SIGABRT, SIGINT, SIGTERM, SIGHUP), exit=True, returncode=1):
        self.signals = signals
        self.exit = exit
        self.returncode = returncode
        self.caught = False
        self._previous = {}

    def handler(self, *args):
        print("Caught signal, will terminate when finished", file=sys.stderr)
        self.caught = True

    def __enter__(self):
        for sig in self.signals:
            try:
                self._previous[sig] = signal(sig, self.handler)
            except ValueError:
                # not in the main thread
                pass
        return self

    def __exit__(self, *args):
        for sig, previous in self._previous.items():
            signal(sig, previous)
        if self.exit and self.caught:
            sys.exit(self.returncode)
