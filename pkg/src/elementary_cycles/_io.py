"""Atomic file output shared by the modules and the CLI."""

from __future__ import annotations

import csv
import io
import numbers
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def format_value(v) -> str:
    """Floats are written with ``repr`` so they round-trip exactly."""
    if isinstance(v, (bool, str, numbers.Integral)):
        return str(v)
    try:
        return repr(float(v))
    except (TypeError, ValueError):
        return str(v)


def atomic_write_text(path: "str | Path", text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_csv(path: "str | Path", header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return atomic_write_text(path, buf.getvalue())
