"""Sweep n for fixed (t, d, mode): record best potentials, find the jump.

A scan runs multi-restart minimization for each n in a range, records
the best potential found, and classifies where the error curve jumps to
numerical zero (and where isolated "special" zeros occur below the
jump).  Tables persist as CSV plus a JSON metadata sidecar.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path

from .core import DESIGN_ZERO_FACTOR, DesignProblem, Mode
from .optimize import SolverOptions, multi_start

# Restarts double once when the best value lands in this ambiguous band
# (in units of n**2): too low to dismiss, too high to accept.
ESCALATION_BAND = (DESIGN_ZERO_FACTOR, 1e-6)

# Per-n seed stride; keeps every n's restart seeds disjoint and
# independent of scan order, so resumed scans reproduce fresh ones.
_SEED_STRIDE = 1_000_000

CSV_COLUMNS = ["t", "d", "n", "mode", "best_f", "restarts_used", "wall_seconds", "is_zero"]


@dataclass(frozen=True)
class ScanRecord:
    t: int
    d: int
    n: int
    mode: Mode
    best_f: float
    restarts_used: int
    wall_seconds: float
    is_zero: bool


@dataclass(frozen=True)
class ScanTable:
    records: tuple
    metadata: dict

    def __post_init__(self):
        ns = [r.n for r in self.records]
        if ns != sorted(set(ns)):
            raise ValueError("records must be strictly increasing in n")
        object.__setattr__(self, "records", tuple(self.records))

    def record_for(self, n: int):
        for r in self.records:
            if r.n == n:
                return r
        return None


def _scan_one(t, d, mode, n, restarts, options, zero_factor, escalate, workers):
    seed_n = options.seed + n * _SEED_STRIDE
    opts = replace(options, seed=seed_n)
    problem = DesignProblem(t, d, n, mode)
    start = time.perf_counter()
    best, _ = multi_start(problem, restarts, opts, workers=workers)
    used = restarts
    if escalate and zero_factor * n**2 < best.f_value <= ESCALATION_BAND[1] * n**2:
        more_best, _ = multi_start(
            problem, restarts, replace(opts, seed=seed_n + restarts), workers=workers
        )
        used = 2 * restarts
        if (more_best.f_value, more_best.seed) < (best.f_value, best.seed):
            best = more_best
    wall = time.perf_counter() - start
    return ScanRecord(
        t=t,
        d=d,
        n=n,
        mode=mode,
        best_f=best.f_value,
        restarts_used=used,
        wall_seconds=wall,
        is_zero=bool(best.f_value <= zero_factor * n**2),
    )


def scan_n_range(
    t: int,
    d: int,
    mode: Mode,
    n_from: int,
    n_to: int,
    restarts: int,
    options: SolverOptions | None = None,
    zero_factor: float = DESIGN_ZERO_FACTOR,
    escalate: bool = True,
    resume: ScanTable | None = None,
    workers: int = 1,
    progress=None,
) -> ScanTable:
    """Best potential per n over a contiguous range; deterministic given seed.

    Pass a partial table as ``resume`` to skip its rows; the result is
    identical (up to wall-clock fields) to a fresh full run with the
    same seed.  ``progress`` is an optional callable fed each finished
    record.
    """
    if n_from > n_to:
        raise ValueError(f"need n_from <= n_to, got {n_from} > {n_to}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    options = options or SolverOptions()
    records = []
    for n in range(n_from, n_to + 1):
        old = resume.record_for(n) if resume is not None else None
        if old is not None:
            records.append(old)
            continue
        rec = _scan_one(t, d, mode, n, restarts, options, zero_factor, escalate, workers)
        if progress is not None:
            progress(rec)
        records.append(rec)
    metadata = {
        "t": t,
        "d": d,
        "mode": mode.value,
        "seed": options.seed,
        "restarts": restarts,
        "zero_factor": zero_factor,
        "escalate": escalate,
        "max_iterations": options.max_iterations,
        "gradient_tolerance": options.gradient_tolerance,
        "initial_trust_radius_factor": options.initial_trust_radius_factor,
    }
    return ScanTable(records=tuple(records), metadata=metadata)


def _zero_flags(table: ScanTable, zero_factor: float | None):
    if zero_factor is None:
        return [r.is_zero for r in table.records]
    return [r.best_f <= zero_factor * r.n**2 for r in table.records]


def detect_jump(table: ScanTable, zero_factor: float | None = None):
    """Smallest n that starts an all-zero tail of the table, or None.

    Isolated zeros below the jump are ignored (see
    :func:`detect_special`); a table whose last row is nonzero has no
    jump.
    """
    if not table.records:
        raise ValueError("empty scan table")
    flags = _zero_flags(table, zero_factor)
    start = None
    for rec, flag in zip(table.records, flags):
        if flag and start is None:
            start = rec.n
        elif not flag:
            start = None
    return start


def detect_special(table: ScanTable, zero_factor: float | None = None):
    """n values whose zero is immediately followed by a nonzero row."""
    if not table.records:
        raise ValueError("empty scan table")
    flags = _zero_flags(table, zero_factor)
    special = []
    for (rec, flag), nxt in zip(zip(table.records, flags), flags[1:]):
        if flag and not nxt:
            special.append(rec.n)
    return special


def exceptional_check(table: ScanTable, n: int, zero_factor: float | None = None) -> bool:
    """True iff n is zero while both neighbours n-1 and n+1 are nonzero."""
    trio = [table.record_for(m) for m in (n - 1, n, n + 1)]
    if any(r is None for r in trio):
        raise ValueError(f"table must contain n-1, n, n+1 for n={n}")
    if zero_factor is None:
        flags = [r.is_zero for r in trio]
    else:
        flags = [r.best_f <= zero_factor * r.n**2 for r in trio]
    return flags[1] and not flags[0] and not flags[2]


def bisect_jump(
    t: int,
    d: int,
    mode: Mode,
    n_lo: int,
    n_hi: int,
    restarts: int,
    options: SolverOptions | None = None,
    zero_factor: float = DESIGN_ZERO_FACTOR,
    workers: int = 1,
) -> tuple[int | None, ScanTable]:
    """Locate the jump by bisection, evaluating O(log range) values of n.

    Assumes the generic one-jump shape (nonzero below, zero above).
    Returns ``(n_jump, table-of-evaluated-rows)``; n_jump is None when
    the upper endpoint is not already zero.
    """
    if n_lo >= n_hi:
        raise ValueError("need n_lo < n_hi")
    options = options or SolverOptions()
    cache = {}

    def look(n):
        if n not in cache:
            cache[n] = _scan_one(t, d, mode, n, restarts, options, zero_factor, True, workers)
        return cache[n]

    lo, hi = n_lo, n_hi
    if not look(hi).is_zero:
        jump = None
    else:
        if look(lo).is_zero:
            jump = lo
        else:
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if look(mid).is_zero:
                    hi = mid
                else:
                    lo = mid
            jump = hi
    records = tuple(cache[n] for n in sorted(cache))
    metadata = {
        "t": t,
        "d": d,
        "mode": mode.value,
        "seed": options.seed,
        "restarts": restarts,
        "zero_factor": zero_factor,
        "bisect": True,
    }
    return jump, ScanTable(records=records, metadata=metadata)


def save_table(table: ScanTable, path) -> None:
    """Write the CSV (17-significant-digit floats) and its JSON sidecar."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in table.records:
            writer.writerow(
                [
                    r.t,
                    r.d,
                    r.n,
                    r.mode.value,
                    format(r.best_f, ".17g"),
                    r.restarts_used,
                    format(r.wall_seconds, ".17g"),
                    "true" if r.is_zero else "false",
                ]
            )
    sidecar = path.with_suffix(path.suffix + ".meta.json")
    sidecar.write_text(json.dumps(table.metadata, indent=2, sort_keys=True) + "\n")


def load_table(path) -> ScanTable:
    """Inverse of :func:`save_table`; the sidecar is optional."""
    path = Path(path)
    records = []
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != CSV_COLUMNS:
                raise ValueError(f"{path} is not a scan CSV (columns {reader.fieldnames})")
            for row in reader:
                records.append(
                    ScanRecord(
                        t=int(row["t"]),
                        d=int(row["d"]),
                        n=int(row["n"]),
                        mode=Mode(row["mode"]),
                        best_f=float(row["best_f"]),
                        restarts_used=int(row["restarts_used"]),
                        wall_seconds=float(row["wall_seconds"]),
                        is_zero={"true": True, "false": False}[row["is_zero"].lower()],
                    )
                )
    except (OSError, KeyError, ValueError) as exc:
        raise ValueError(f"cannot read scan table {path}: {exc}") from exc
    sidecar = path.with_suffix(path.suffix + ".meta.json")
    metadata = json.loads(sidecar.read_text()) if sidecar.exists() else {}
    return ScanTable(records=tuple(records), metadata=metadata)
