"""Reading and writing the design JSON file format.

A design file is a JSON object with fields ``t`` (optional), ``d``,
``n``, ``mode`` ("equal_norm" | "weighted"), ``entries`` (row-major
array of d*n numbers) and an optional ``meta`` object.  Entries are
printed with 17 significant digits so files round-trip bit-exactly at
double precision.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import Configuration, Mode


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def design_document(config: Configuration, t: int | None = None, meta: dict | None = None) -> str:
    """Serialize a configuration to the design JSON text."""
    parts = ["{"]
    if t is not None:
        parts.append(f'  "t": {int(t)},')
    parts.append(f'  "d": {config.d},')
    parts.append(f'  "n": {config.n},')
    parts.append(f'  "mode": "{config.mode.value}",')
    flat = [_fmt(x) for x in config.entries.ravel(order="C")]
    rows = []
    for i in range(config.d):
        rows.append("    " + ", ".join(flat[i * config.n : (i + 1) * config.n]))
    tail = "," if meta is not None else ""
    parts.append('  "entries": [')
    parts.append(",\n".join(rows))
    parts.append(f"  ]{tail}")
    if meta is not None:
        parts.append(f'  "meta": {json.dumps(meta, sort_keys=True)}')
    parts.append("}")
    return "\n".join(parts) + "\n"


def save_design(path, config: Configuration, t: int | None = None, meta: dict | None = None) -> None:
    Path(path).write_text(design_document(config, t, meta))


def load_design(path):
    """Load a design file; returns ``(Configuration, t, meta)``.

    ``t`` and ``meta`` are None when absent from the file.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read design file {path}: {exc}") from exc
    for key in ("d", "n", "mode", "entries"):
        if key not in doc:
            raise ValueError(f"design file {path} missing field {key!r}")
    d, n = int(doc["d"]), int(doc["n"])
    try:
        mode = Mode(doc["mode"])
    except ValueError:
        raise ValueError(f"design file {path} has unknown mode {doc['mode']!r}")
    entries = np.asarray(doc["entries"], dtype=float)
    if entries.size != d * n:
        raise ValueError(
            f"design file {path} has {entries.size} entries, expected d*n = {d * n}"
        )
    config = Configuration(entries.reshape(d, n), mode)
    t = int(doc["t"]) if "t" in doc and doc["t"] is not None else None
    return config, t, doc.get("meta")
