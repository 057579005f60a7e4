"""Experiment reports and their on-disk form.

Layout under ``DIR/<experiment_id>/``:

* ``report.csv`` - one row per configuration, columns in ``report.columns`` order
* ``summary.json`` - config echo, slope fits, flags and metadata
* ``plots/<figure>__<series>.dat`` - two whitespace-separated columns (x y)
* ``figures/<figure>.png`` - rendered with matplotlib (Agg backend)
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .stats import SlopeFit


@dataclass
class Series:
    label: str
    x: list
    y: list


@dataclass
class Figure:
    name: str
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    logx: bool = False
    logy: bool = False
    reference_slopes: tuple = ()

    def add(self, label, x, y) -> None:
        self.series.append(Series(label, [float(v) for v in x], [float(v) for v in y]))


@dataclass
class ExperimentReport:
    experiment_id: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    slope_fits: list[SlopeFit] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    figures: list[Figure] = field(default_factory=list)

    def add_row(self, **values) -> dict:
        missing = [c for c in self.columns if c not in values]
        extra = [k for k in values if k not in self.columns]
        if missing or extra:
            raise KeyError(f"row mismatch: missing={missing} extra={extra}")
        self.rows.append(values)
        return values

    def column(self, name: str) -> list:
        return [r[name] for r in self.rows]

    def select(self, **match) -> list[dict]:
        return [r for r in self.rows if all(r[k] == v for k, v in match.items())]

    def fit(self, estimator: str) -> SlopeFit:
        for f in self.slope_fits:
            if f.estimator == estimator:
                return f
        raise KeyError(estimator)

    def summary(self) -> dict:
        return {
            "experiment_id": self.experiment_id,
            "columns": self.columns,
            "slope_fits": [f.to_dict() for f in self.slope_fits],
            "config": self.config,
            "meta": self.meta,
        }


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _jsonable(obj.item())
    return obj


def write_report(report: ExperimentReport, out_dir, figures: bool = True) -> Path:
    """Write the report files; returns the experiment directory."""
    root = Path(out_dir) / report.experiment_id
    plots = root / "plots"
    plots.mkdir(parents=True, exist_ok=True)

    with (root / "report.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_cell(row[c]) for c in report.columns])

    (root / "summary.json").write_text(
        json.dumps(_jsonable(report.summary()), indent=2, sort_keys=True) + "\n"
    )

    for fig in report.figures:
        for s in fig.series:
            name = f"{fig.name}__{_slug(s.label)}.dat"
            with (plots / name).open("w") as fh:
                fh.write(f"# {s.label}\n")
                for x, y in zip(s.x, s.y):
                    fh.write(f"{x!r} {y!r}\n")
    if figures and report.figures:
        render_figures(report, root / "figures")
    return root


def _slug(text: str) -> str:
    out = "".join(c.lower() if c.isalnum() else "_" for c in text)
    return "_".join(p for p in out.split("_") if p)


def render_figures(report: ExperimentReport, fig_dir) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig_dir = Path(fig_dir)
    fig_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for spec in report.figures:
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        for s in spec.series:
            pts = [(x, y) for x, y in zip(s.x, s.y) if math.isfinite(y)]
            if spec.logy:
                pts = [(x, y) for x, y in pts if y > 0]
            if pts:
                xs, ys = zip(*pts)
                ax.plot(xs, ys, marker="o", label=s.label)
        for slope in spec.reference_slopes:
            _reference_line(ax, spec, slope)
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_title(spec.title)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        ax.grid(True, alpha=0.3, which="both")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = fig_dir / f"{spec.name}.png"
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        paths.append(path)
    return paths


def _reference_line(ax, spec: Figure, slope: float) -> None:
    first = next((s for s in spec.series if s.x and s.y and s.y[0] > 0), None)
    if first is None:
        return
    x0, y0 = first.x[0], first.y[0]
    x1 = max(first.x)
    ax.plot([x0, x1], [y0, y0 * (x1 / x0) ** slope], linestyle="--", color="grey",
            linewidth=0.8, label=f"slope {slope:g}")
