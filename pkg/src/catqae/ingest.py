"""Loss data acquisition: synthetic Pareto draws and NOAA Storm Events detail files.

NOAA detail files are gzip-compressed CSVs with a ``DAMAGE_PROPERTY`` text
column such as ``"10.00K"`` or ``"2.5M"``.  Files are cached under a cache
directory next to a pinned manifest (``noaa_manifest.json``) so that an
analysis can be rerun against exactly the same snapshot.
"""

from __future__ import annotations

import csv
import datetime
import gzip
import hashlib
import io
import json
import logging
import re
import urllib.request
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

NOAA_BASE_URL = "https://www.ncei.noaa.gov/pub/data/swdi/stormevents/csvfiles/"
MANIFEST_NAME = "noaa_manifest.json"
MIN_PROPERTY_DAMAGE = 1000.0
DAMAGE_COLUMN = "DAMAGE_PROPERTY"

_SUFFIX = {"": 1.0, "K": 1e3, "M": 1e6, "B": 1e9}
_DAMAGE_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+)\s*([KMB]?)\s*$", re.IGNORECASE)
_DETAIL_RE = re.compile(r"StormEvents_details-ftp_v1\.0_d(\d{4})_c(\d{8})\.csv\.gz")


class DataError(RuntimeError):
    """Input data is missing, empty or unusable."""


class DamageParseError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestFile:
    filename: str
    year: int
    sha256: str | None = None
    size: int | None = None

    def to_dict(self) -> dict:
        d = {"filename": self.filename, "year": self.year}
        if self.sha256 is not None:
            d["sha256"] = self.sha256
        if self.size is not None:
            d["size"] = self.size
        return d


@dataclass
class Manifest:
    base_url: str
    files: list[ManifestFile]
    retrieved_date: str

    def to_dict(self) -> dict:
        return {
            "base_url": self.base_url,
            "files": [f.to_dict() for f in self.files],
            "retrieved_date": self.retrieved_date,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Manifest":
        try:
            files = [
                ManifestFile(f["filename"], int(f["year"]), f.get("sha256"), f.get("size"))
                for f in d["files"]
            ]
            return cls(d["base_url"], files, str(d["retrieved_date"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed manifest: {exc}") from exc

    def save(self, cache_dir) -> Path:
        path = Path(cache_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        return path

    @classmethod
    def load(cls, cache_dir) -> "Manifest":
        path = Path(cache_dir) / MANIFEST_NAME
        if not path.exists():
            raise DataError(f"no manifest at {path}")
        return cls.from_dict(json.loads(path.read_text()))


# Snapshot used for the published NOAA results (retrieved 2026-02-27).
PINNED_MANIFEST = Manifest(
    base_url=NOAA_BASE_URL,
    files=[
        ManifestFile("StormEvents_details-ftp_v1.0_d2020_c20260116.csv.gz", 2020),
        ManifestFile("StormEvents_details-ftp_v1.0_d2021_c20250520.csv.gz", 2021),
        ManifestFile("StormEvents_details-ftp_v1.0_d2022_c20250721.csv.gz", 2022),
        ManifestFile("StormEvents_details-ftp_v1.0_d2023_c20260116.csv.gz", 2023),
        ManifestFile("StormEvents_details-ftp_v1.0_d2024_c20260116.csv.gz", 2024),
    ],
    retrieved_date="2026-02-27",
)
PINNED_RECORD_COUNT = 58028


@dataclass
class LossDataset:
    losses: np.ndarray
    source: str
    record_count: int = -1
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.losses = np.asarray(self.losses, dtype=float)
        if self.record_count < 0:
            self.record_count = int(self.losses.size)
        if self.record_count != self.losses.size:
            raise DataError("record_count does not match the loss vector")
        if self.source not in ("synthetic_pareto", "noaa"):
            raise DataError(f"unknown source {self.source!r}")
        if self.losses.size and not np.all(np.isfinite(self.losses)):
            raise DataError("non-finite loss value")
        if self.source == "noaa" and self.losses.size and self.losses.min() < MIN_PROPERTY_DAMAGE:
            raise DataError("NOAA losses must be >= $1,000")
        if self.source == "synthetic_pareto" and self.losses.size and self.losses.min() <= 0:
            raise DataError("synthetic losses must be positive")

    def export(self, path) -> Path:
        """Write one loss per line (dollars, two decimals)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as fh:
            for v in self.losses:
                fh.write(f"{v:.2f}\n")
        return path


def generate_pareto(count: int, alpha: float, x_m: float, seed) -> LossDataset:
    """Pareto type I draws x_m * (1 + Lomax(alpha)), i.e. x_m * U**(-1/alpha) in law."""
    if alpha <= 0 or x_m <= 0:
        raise ValueError("alpha and x_m must be positive")
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = np.random.default_rng(seed)
    losses = (rng.pareto(alpha, count) + 1.0) * x_m
    return LossDataset(
        losses,
        "synthetic_pareto",
        count,
        {"generator": "pareto_type_1", "count": count, "alpha": alpha,
         "x_m": x_m, "seed": seed},
    )


def parse_damage(text: str | None) -> float | None:
    """Dollar value of a NOAA damage field, or None for an empty field.

    ``K``/``M``/``B`` suffixes scale by 1e3/1e6/1e9; bare numbers are
    dollars.  Results are rounded to cents.  Raises DamageParseError on
    anything else.
    """
    if text is None:
        return None
    s = text.strip()
    if not s:
        return None
    m = _DAMAGE_RE.match(s)
    if not m:
        raise DamageParseError(f"unparseable damage field {text!r}")
    value = float(m.group(1)) * _SUFFIX[m.group(2).upper()]
    return round(value, 2)


def format_damage(dollars: float) -> str:
    """Inverse of parse_damage on the two-decimal K/M/B grid NOAA uses."""
    if dollars >= 1e9:
        return f"{dollars / 1e9:.2f}B"
    if dollars >= 1e6:
        return f"{dollars / 1e6:.2f}M"
    return f"{dollars / 1e3:.2f}K"


@dataclass
class FileParse:
    filename: str
    year: int
    losses: list[float]
    rows: int = 0
    empty: int = 0
    below_min: int = 0
    malformed: int = 0

    @property
    def kept(self) -> int:
        return len(self.losses)

    def counts(self) -> dict:
        return {"filename": self.filename, "year": self.year, "rows": self.rows,
                "kept": self.kept, "empty": self.empty,
                "below_min": self.below_min, "malformed": self.malformed}


def read_detail_file(path, year: int | None = None) -> FileParse:
    """Parse one gzip detail CSV and keep property damage >= $1,000."""
    path = Path(path)
    out = FileParse(path.name, -1 if year is None else year, [])
    with gzip.open(path, "rt", newline="", encoding="utf-8", errors="replace") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or DAMAGE_COLUMN not in reader.fieldnames:
            raise DataError(f"{path.name}: no {DAMAGE_COLUMN} column")
        for lineno, row in enumerate(reader, start=2):
            out.rows += 1
            try:
                value = parse_damage(row.get(DAMAGE_COLUMN))
            except DamageParseError as exc:
                out.malformed += 1
                log.warning("%s line %d: %s (skipped)", path.name, lineno, exc)
                continue
            if value is None:
                out.empty += 1
            elif value < MIN_PROPERTY_DAMAGE:
                out.below_min += 1
            else:
                out.losses.append(value)
    return out


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _download(url: str, dest: Path, timeout: float = 120.0) -> None:
    tmp = dest.with_suffix(dest.suffix + ".part")
    with urllib.request.urlopen(url, timeout=timeout) as resp, open(tmp, "wb") as fh:
        for chunk in iter(lambda: resp.read(1 << 20), b""):
            fh.write(chunk)
    tmp.replace(dest)


def _check_file(entry: ManifestFile, path: Path) -> None:
    if entry.size is not None and path.stat().st_size != entry.size:
        warnings.warn(f"{entry.filename}: size {path.stat().st_size} != manifest {entry.size}")
    if entry.sha256 is not None and sha256_of(path) != entry.sha256:
        warnings.warn(f"{entry.filename}: sha256 differs from manifest")


def load_noaa(manifest: Manifest, cache_dir, offline: bool = False,
              workers: int = 4) -> LossDataset:
    """Load every manifest file from the cache (downloading missing ones when online)."""
    if not manifest.files:
        raise DataError("manifest lists no files")
    cache = Path(cache_dir)
    missing = [f for f in manifest.files if not (cache / f.filename).exists()]
    if missing and offline:
        raise DataError(f"offline and not cached: {missing[0].filename} (in {cache})")
    if missing:
        cache.mkdir(parents=True, exist_ok=True)
        base = manifest.base_url if manifest.base_url.endswith("/") else manifest.base_url + "/"
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            jobs = [pool.submit(_download, base + f.filename, cache / f.filename)
                    for f in missing]
            for job, f in zip(jobs, missing):
                try:
                    job.result()
                except OSError as exc:
                    raise DataError(f"download of {f.filename} failed: {exc}") from exc
        if not (cache / MANIFEST_NAME).exists():
            pinned = Manifest(manifest.base_url, [
                ManifestFile(f.filename, f.year, sha256_of(cache / f.filename),
                             (cache / f.filename).stat().st_size)
                for f in manifest.files
            ], manifest.retrieved_date)
            pinned.save(cache)

    entries = sorted(manifest.files, key=lambda f: (f.year, f.filename))
    for f in entries:
        _check_file(f, cache / f.filename)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parsed = list(pool.map(lambda f: read_detail_file(cache / f.filename, f.year), entries))

    losses = np.concatenate([np.asarray(p.losses, dtype=float) for p in parsed])
    per_file = [p.counts() for p in parsed]
    if losses.size != PINNED_RECORD_COUNT and _same_files(manifest, PINNED_MANIFEST):
        log.warning("loaded %d records; the pinned snapshot has %d", losses.size,
                    PINNED_RECORD_COUNT)
    return LossDataset(losses, "noaa", int(losses.size),
                       {"manifest": manifest.to_dict(), "cache_dir": str(cache),
                        "files": per_file})


def _same_files(a: Manifest, b: Manifest) -> bool:
    return [f.filename for f in a.files] == [f.filename for f in b.files]


def parse_index(html: str, years) -> list[ManifestFile]:
    """Latest detail file per requested year found in a directory listing."""
    best: dict[int, tuple[str, str]] = {}
    for m in _DETAIL_RE.finditer(html):
        year, created = int(m.group(1)), m.group(2)
        if year in years and (year not in best or created > best[year][0]):
            best[year] = (created, m.group(0))
    return [ManifestFile(best[y][1], y) for y in sorted(best)]


def discover_files(years, base_url: str = NOAA_BASE_URL, retrieved_date: str = "",
                   timeout: float = 60.0) -> Manifest:
    """List the remote index and build a manifest of the newest file per year."""
    with urllib.request.urlopen(base_url, timeout=timeout) as resp:
        html = resp.read().decode("utf-8", errors="replace")
    files = parse_index(html, set(years))
    if not files:
        raise DataError(f"no detail files for {sorted(years)} at {base_url}")
    if not retrieved_date:
        retrieved_date = datetime.date.today().isoformat()
    return Manifest(base_url, files, retrieved_date)


def load_losses_text(path) -> np.ndarray:
    """Read a newline-delimited loss export."""
    text = Path(path).read_text()
    return np.loadtxt(io.StringIO(text), dtype=float, ndmin=1) if text.strip() else np.zeros(0)
