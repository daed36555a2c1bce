"""CSV with a ``#``-prefixed JSON header line; floats use the shortest
round-trip decimal form."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from contextlib import contextmanager

import numpy as np


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else repr(v)
    return v


def format_csv(header: dict | None, columns, rows) -> str:
    buf = io.StringIO()
    if header is not None:
        buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict | None, list, list]:
    """Inverse of :func:`format_csv`; values stay strings."""
    lines = text.splitlines()
    header = None
    if lines and lines[0].startswith("# "):
        header = json.loads(lines[0][2:])
        lines = lines[1:]
    reader = csv.reader(lines)
    columns = next(reader)
    return header, columns, list(reader)


@contextmanager
def open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh
