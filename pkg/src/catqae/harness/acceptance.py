"""Pass/fail checks of experiment reports against the published tolerance bands.

Used by ``run --check`` (exit code 4 on failure) and by the acceptance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .report import ExperimentReport


@dataclass(frozen=True)
class Check:
    criterion: str
    description: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.criterion}: {self.description} ({self.detail})"


def _in(x, lo, hi) -> bool:
    return x is not None and not math.isnan(x) and lo <= x <= hi


def check_invariants(report: ExperimentReport) -> list[Check]:
    """Row-level invariants shared by every experiment."""
    bad = [r for r in report.rows
           if r["disc_error"] != abs(r["ground_truth_bins"] - r["ground_truth_analytic"])]
    out = [Check("inv", "disc_error = |bins - analytic| on every row", not bad,
                 f"{len(bad)} bad rows")]
    if report.experiment_id in ("exp1", "exp4a"):
        ok = all(r["queries"] == r["shots"] * (2 * r["k"] + 1) for r in report.rows)
        out.append(Check("inv", "query parity", ok, "queries = shots*(2k+1) = classical budget"))
        q, c = report.fit("quantum"), report.fit("classical_bins")
        out.append(Check("inv", "slope sanity",
                         c.ci_intersects(-0.65, -0.40) and q.slope < c.slope,
                         f"quantum {q.slope:.3f}, classical {c.slope:.3f} "
                         f"[{c.ci_low:.3f}, {c.ci_high:.3f}]"))
    return out


def check_exp1(r: ExperimentReport) -> list[Check]:
    q, c = r.fit("quantum"), r.fit("classical_bins")
    k6 = r.select(k=6)
    sp = k6[0]["speedup"] if k6 else math.nan
    ok = (q.slope <= -0.85 and not q.ci_contains(-0.5)
          and c.ci_intersects(-0.65, -0.40) and _in(sp, 1.5, 3.5))
    return [Check("7", "Exp 1 slopes and k=6 speedup", ok,
                  f"quantum slope {q.slope:.3f} CI [{q.ci_low:.3f}, {q.ci_high:.3f}]; "
                  f"classical CI [{c.ci_low:.3f}, {c.ci_high:.3f}]; speedup(k=6) {sp:.2f}")]


def check_exp2(r: ExperimentReport) -> list[Check]:
    row = {x["noise"]: x for x in r.rows}
    try:
        n, lo, me, hi = (row[p] for p in ("noiseless", "low", "medium", "high"))
    except KeyError as exc:
        return [Check("8", "Exp 2 noise degradation", False, f"missing preset {exc}")]
    sat = abs(me["rmse"] - hi["rmse"]) / max(me["rmse"], hi["rmse"])
    ok = (n["rmse"] <= 100 and lo["rmse"] >= 10 * n["rmse"] and lo["bias"] > 0
          and sat <= 0.25)
    return [Check("8", "Exp 2 noise degradation", ok,
                  f"noiseless {n['rmse']:.0f}, low {lo['rmse']:.0f} (bias {lo['bias']:+.0f}), "
                  f"medium {me['rmse']:.0f}, high {hi['rmse']:.0f}, gap {sat:.1%}")]


def check_exp3(r: ExperimentReport) -> list[Check]:
    rows = sorted(r.rows, key=lambda x: x["percentile"])
    sp = [x["speedup"] for x in rows]
    ok = all(_in(s, 1.0, 4.0) for s in sp) and all(a <= b for a, b in zip(sp, sp[1:]))
    return [Check("9", "Exp 3 speedups in [1, 4] and nondecreasing", ok,
                  " / ".join(f"{x['percentile']:g}th {x['speedup']:.2f}" for x in rows))]


def check_exp4a(r: ExperimentReport) -> list[Check]:
    k6 = r.select(k=6)
    sp = k6[0]["speedup"] if k6 else math.nan
    return [Check("4a", "Exp 4A k=6 speedup in [1.5, 3.5]", _in(sp, 1.5, 3.5), f"{sp:.2f}")]


def check_exp4b(r: ExperimentReport) -> list[Check]:
    by = {x["percentile"]: x for x in r.rows}
    try:
        r90, r95, r97 = by[90.0], by[95.0], by[97.0]
    except KeyError as exc:
        return [Check("10", "Exp 4 NOAA tail sweep", False, f"missing percentile {exc}")]
    ok = (_in(r95["speedup"], 1.5, 3.5) and _in(r97["speedup"], 1.5, 3.5)
          and r90["pathological"] and r90["disc_error"] > r90["ground_truth_analytic"])
    return [Check("10", "Exp 4 NOAA speedups and pathological 90th row", ok,
                  f"95th {r95['speedup']:.2f}, 97th {r97['speedup']:.2f}, 90th disc "
                  f"{r90['disc_error']:.0f} vs analytic {r90['ground_truth_analytic']:.0f}")]


def check_exp5(r: ExperimentReport) -> list[Check]:
    rows = [x for x in r.rows if x["budget"] == 8192]
    if not rows:
        return [Check("11", "Exp 5 ordering at B=8192", False, "no B=8192 rows")]
    order = all(x["rmse_ct"] < x["rmse_naive"] and x["rmse_qmc"] < x["rmse_naive"]
                for x in rows)
    ct97 = [x["rmse_ct"] for x in rows if x["percentile"] == 97.0]
    qmc = [x["rmse_qmc"] for x in rows]
    ok = (order and bool(ct97) and ct97[0] <= 30 and all(15 <= v <= 90 for v in qmc)
          and max(qmc) < 2 * min(qmc))
    return [Check("11", "Exp 5 CT/QMC beat naive; CT(97th) <= 30; QMC in [15, 90], < 2x spread",
                  ok, f"CT97 {ct97[0] if ct97 else math.nan:.1f}; QMC "
                  + "/".join(f"{v:.1f}" for v in qmc))]


def check_exp6(r: ExperimentReport) -> list[Check]:
    d = sorted(r.column("disc_error"))
    mid = d[len(d) // 2]
    band = all(abs(v - mid) <= 0.3 * mid for v in d)
    ratios = [(x["n_qubits"], x["speedup"]) for x in r.rows if x["n_qubits"] <= 6]
    ratio_ok = bool(ratios) and all(_in(v, 2.0, 4.0) for _, v in ratios)
    sp = r.column("sp_two_qubit")
    mono = all(a < b for a, b in zip(sp, sp[1:]))
    return [Check("12", "Exp 6 flat disc_error; ratio in [2, 4] for n <= 6; CX count increasing",
                  band and ratio_ok and mono,
                  f"disc {min(d):.0f}-{max(d):.0f}; ratios "
                  + ", ".join(f"n={n}:{v:.2f}" for n, v in ratios) + f"; SP CX {sp}")]


def check_exp7(r: ExperimentReport) -> list[Check]:
    top = max(r.column("budget"))
    rows = [x for x in r.rows if x["budget"] == top]
    ok = all(_in(x["speedup"], 1.2, 3.0) and x["k"] == 1 for x in rows) and bool(rows)
    return [Check("13", f"Exp 7 speedup in [1.2, 3] with k = 1 (B={top})", ok,
                  " / ".join(f"{x['percentile']:g}th {x['speedup']:.2f} (k={x['k']})"
                             for x in rows))]


def check_binning(r: ExperimentReport) -> list[Check]:
    def get(scheme, n):
        rows = r.select(scheme=scheme, n_qubits=n)
        return rows[0] if rows else None

    need = [get(s, n) for s in ("equal_width", "log_spaced") for n in (3, 4, 5)]
    if any(x is None for x in need):
        return [Check("14", "Binning study", False, "missing (scheme, n) rows")]
    e3, e4, e5, l3, l4, l5 = need
    ok = (l4["disc_error"] <= e4["disc_error"] / 3 and l3["disc_error"] > e3["disc_error"]
          and l4["k_max"] > e4["k_max"] and l5["k_max"] > e5["k_max"])
    return [Check("14", "Binning: log-spaced wins at n=4, loses at n=3, higher k_max", ok,
                  f"disc n=3 {l3['disc_error']:.0f} vs {e3['disc_error']:.0f}; n=4 "
                  f"{l4['disc_error']:.0f} vs {e4['disc_error']:.0f}; k_max "
                  f"{l4['k_max']}/{l5['k_max']} vs {e4['k_max']}/{e5['k_max']}")]


CHECKS = {
    "exp1": check_exp1,
    "exp2": check_exp2,
    "exp3": check_exp3,
    "exp4a": check_exp4a,
    "exp4b": check_exp4b,
    "exp5": check_exp5,
    "exp6": check_exp6,
    "exp7": check_exp7,
    "binning": check_binning,
}


def check_report(report: ExperimentReport) -> list[Check]:
    return check_invariants(report) + CHECKS[report.experiment_id](report)
