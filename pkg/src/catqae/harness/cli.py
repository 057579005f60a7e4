"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 acceptance
threshold violated (``run --check``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..ingest import (
    MANIFEST_NAME,
    NOAA_BASE_URL,
    PINNED_MANIFEST,
    DataError,
    Manifest,
    discover_files,
    generate_pareto,
    load_noaa,
)
from ..standin import write_standin_cache
from .acceptance import check_report
from .config import EXPERIMENT_IDS, build_config, load_overrides
from .experiments import run_experiment
from .projection import resource_projection
from .report import write_report

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_CHECK = 0, 2, 3, 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catqae", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write its report")
    run.add_argument("experiment_id", choices=EXPERIMENT_IDS)
    run.add_argument("--dataset", choices=("synthetic", "noaa"))
    run.add_argument("--fast", action="store_true", help="10 repetitions, n <= 6")
    run.add_argument("--seed", type=int, dest="master_seed")
    run.add_argument("--out", default="results")
    run.add_argument("--offline", action="store_true", default=None)
    run.add_argument("--cache", dest="noaa_cache", help="NOAA cache directory")
    run.add_argument("--workers", type=int)
    run.add_argument("--config", help="JSON file of config overrides")
    run.add_argument("--check", action="store_true",
                     help="evaluate acceptance thresholds; exit 4 on failure")
    run.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    ing = sub.add_parser("ingest", help="acquire loss data")
    isub = ing.add_subparsers(dest="source", required=True)
    noaa = isub.add_parser("noaa", help="download or verify the NOAA detail files")
    noaa.add_argument("--cache", default="data/cache")
    noaa.add_argument("--offline", action="store_true")
    noaa.add_argument("--discover", nargs="*", type=int, metavar="YEAR",
                      help="list the remote index and pin the newest file per year")
    noaa.add_argument("--standin", action="store_true",
                      help="write the deterministic offline stand-in files into the cache")
    noaa.add_argument("--export", help="write newline-delimited losses here")
    syn = isub.add_parser("synthetic", help="generate Pareto type I losses")
    syn.add_argument("--count", type=int, default=20000)
    syn.add_argument("--alpha", type=float, default=1.5)
    syn.add_argument("--scale", type=float, default=50000.0)
    syn.add_argument("--seed", type=int, default=42)
    syn.add_argument("--export", help="write newline-delimited losses here")

    proj = sub.add_parser("project-resources", help="best-case wall-clock projection")
    proj.add_argument("--classical-n", type=float, required=True)
    proj.add_argument("--classical-cost", type=float, required=True, help="seconds per sample")
    proj.add_argument("--depth", type=float, required=True)
    proj.add_argument("--gate-time", type=float, required=True, help="seconds per layer")
    proj.add_argument("--json", action="store_true")
    return p


def _cmd_run(args) -> int:
    file_overrides = load_overrides(args.config) if args.config else {}
    cli = {"dataset": args.dataset, "master_seed": args.master_seed,
           "offline": args.offline, "noaa_cache": args.noaa_cache, "workers": args.workers}
    cfg = build_config(args.experiment_id, file_overrides, cli, fast=args.fast)
    report = run_experiment(cfg)
    root = write_report(report, args.out, figures=not args.no_figures)
    print(f"wrote {root}")
    if args.check:
        checks = check_report(report)
        for c in checks:
            print(c.line())
        if not all(c.passed for c in checks):
            return EXIT_CHECK
    return EXIT_OK


def _cmd_ingest(args) -> int:
    if args.source == "synthetic":
        ds = generate_pareto(args.count, args.alpha, args.scale, args.seed)
    else:
        cache = Path(args.cache)
        if args.standin:
            write_standin_cache(cache)
        if args.discover is not None:
            manifest = discover_files(args.discover or range(2020, 2025), NOAA_BASE_URL)
        elif (cache / MANIFEST_NAME).exists():
            manifest = Manifest.load(cache)
        else:
            manifest = PINNED_MANIFEST
        ds = load_noaa(manifest, cache, offline=args.offline)
        print(json.dumps(ds.provenance["files"], indent=2))
    print(f"{ds.source}: {ds.record_count} records")
    if ds.record_count:
        print(f"min {ds.losses.min():.2f}, max {ds.losses.max():.2f}")
    if args.export:
        print(f"exported to {ds.export(args.export)}")
    return EXIT_OK


def _cmd_project(args) -> int:
    rep = resource_projection(args.classical_n, args.classical_cost, args.depth,
                              args.gate_time)
    print(json.dumps(rep.to_dict(), indent=2) if args.json else rep.render())
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "ingest":
            return _cmd_ingest(args)
        return _cmd_project(args)
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:  # ConfigError and out-of-domain parameters
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
