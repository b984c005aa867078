#!/usr/bin/env python3
"""Render error-vs-n curves from scan CSV files.

Reads the scan table format (columns t,d,n,mode,best_f,restarts_used,
wall_seconds,is_zero) and draws best_f against n, linearly or as log10.
Exact zeros cannot appear on a log axis, so values at or below the
clamp floor (1e-16) are pinned there and drawn with a distinct open
marker.

Usage:
    plot_scan.py --in scan.csv [scan2.csv ...] --out fig.png
                 [--scale linear|log10] [--title TEXT]
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

SCAN_COLUMNS = ["t", "d", "n", "mode", "best_f", "restarts_used", "wall_seconds", "is_zero"]
ZERO_FLOOR = 1e-16
FIGSIZE = (7.5, 5.0)
DPI = 150


def parse_scan_csv(path):
    """Rows of a scan CSV as a list of dicts; raises ValueError when malformed."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != SCAN_COLUMNS:
                raise ValueError(
                    f"{path}: expected scan CSV columns {SCAN_COLUMNS}, got {reader.fieldnames}"
                )
            rows = [
                {
                    "t": int(row["t"]),
                    "d": int(row["d"]),
                    "n": int(row["n"]),
                    "mode": row["mode"],
                    "best_f": float(row["best_f"]),
                }
                for row in reader
            ]
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: empty scan table")
    return rows


def prepare_series(values, scale):
    """Plot-ready y values plus the mask of clamped (numerically zero) points."""
    if scale == "linear":
        return list(values), [False] * len(values)
    ys, clamped = [], []
    for v in values:
        if v <= ZERO_FLOOR:
            ys.append(math.log10(ZERO_FLOOR))
            clamped.append(True)
        else:
            ys.append(math.log10(v))
            clamped.append(False)
    return ys, clamped


def render(inputs, out_path, scale="linear", title=None):
    """Draw one figure from the given scan CSVs; deterministic output."""
    if scale not in ("linear", "log10"):
        raise ValueError(f"scale must be 'linear' or 'log10', got {scale!r}")
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for path in inputs:
        rows = parse_scan_csv(path)
        ns = [r["n"] for r in rows]
        ys, clamped = prepare_series([r["best_f"] for r in rows], scale)
        label = f"t={rows[0]['t']}, d={rows[0]['d']}, {rows[0]['mode']}"
        ax.plot(ns, ys, "-o", markersize=5, label=label)
        if any(clamped):
            ax.plot(
                [n for n, c in zip(ns, clamped) if c],
                [y for y, c in zip(ys, clamped) if c],
                "D",
                markersize=9,
                markerfacecolor="none",
                markeredgecolor="black",
                label="numerical zero (clamped)",
            )
    ax.set_xlabel("n")
    ax.set_ylabel("error" if scale == "linear" else "log10 error")
    ax.xaxis.get_major_locator().set_params(integer=True)
    if title:
        ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path, metadata={"Software": "plot_scan"})
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="scan CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--scale", choices=("linear", "log10"), default="linear")
    parser.add_argument("--title")
    args = parser.parse_args(argv)
    try:
        render(args.inputs, args.out, scale=args.scale, title=args.title)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
