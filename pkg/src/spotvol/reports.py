"""Deterministic file emission: plot-ready CSVs and JSON reports.

All writers produce byte-identical output for identical inputs: UTF-8,
LF line endings, sorted JSON keys, shortest-repr floats, and file
references kept relative to the report location.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .ingest import PriceSeries
from .lowrank import RankPModel


def _fmt(value: float) -> str:
    # repr gives the shortest round-tripping decimal form, stable across platforms
    return repr(float(value))


def write_json(path: Path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _write_rows(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def series_to_long_csv(series: PriceSeries) -> str:
    """Canonical long format: ISO-8601 timestamps with offset, one per hour."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["timestamp", "price"])
    for ts, value in zip(series.timestamps, series.values):
        writer.writerow([ts.isoformat(), f"{value:.6f}"])
    return buf.getvalue()


def write_long_csv(path: Path, series: PriceSeries) -> None:
    Path(path).write_text(series_to_long_csv(series), encoding="utf-8", newline="\n")


def write_spectrum_csv(path: Path, rows: list[dict]) -> None:
    """Rows from spectrum_report: year,k,sigma,sigma_normalized."""
    _write_rows(
        path,
        ["year", "k", "sigma", "sigma_normalized"],
        [[r["year"], r["k"], _fmt(r["sigma"]), _fmt(r["sigma_normalized"])] for r in rows],
    )


def write_profiles_csv(path: Path, model: RankPModel) -> None:
    """Hourly profile vectors of the retained components: k,hour,u_value."""
    rows = []
    for k in range(model.p):
        for hour in range(model.profiles.shape[0]):
            rows.append([k + 1, hour, _fmt(model.profiles[hour, k])])
    _write_rows(path, ["k", "hour", "u_value"], rows)


def write_amplitudes_csv(path: Path, model: RankPModel) -> None:
    """Day-amplitude vectors of the retained components: k,day,v_value."""
    rows = []
    for k in range(model.p):
        for day in range(model.amplitudes.shape[0]):
            rows.append([k + 1, day + 1, _fmt(model.amplitudes[day, k])])
    _write_rows(path, ["k", "day", "v_value"], rows)


def write_probplot_csv(path: Path, points: list[tuple[float, float]]) -> None:
    _write_rows(
        path,
        ["theoretical_quantile", "ordered_residual"],
        [[_fmt(x), _fmt(y)] for x, y in points],
    )


def write_histogram_csv(path: Path, histogram: list[dict]) -> None:
    """Permutation-distribution bins: bin_left,bin_right,count."""
    _write_rows(
        path,
        ["bin_left", "bin_right", "count"],
        [[_fmt(b["bin_left"]), _fmt(b["bin_right"]), b["count"]] for b in histogram],
    )


def write_trend_csv(path: Path, rows: list[dict]) -> None:
    """Per-year summary: year,mu_hat,fitted,tail_median (empty if absent)."""
    out = []
    for r in rows:
        tail = r.get("tail_median")
        out.append(
            [
                r["year"],
                _fmt(r["mu_hat"]),
                _fmt(r["fitted"]),
                "" if tail is None else _fmt(tail),
            ]
        )
    _write_rows(path, ["year", "mu_hat", "fitted", "tail_median"], out)
