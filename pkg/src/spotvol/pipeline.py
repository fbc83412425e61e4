"""End-to-end orchestration: ingest through statistics to report files.

analyze_year runs the full per-year chain (parse, calendarize, SVD,
truncate, residual statistics, seasonality test) and writes the year
report plus plot-ready CSVs.  analyze_trend runs several years, fits the
multi-year volatility trend, and assembles the combined report.  Reports
are byte-deterministic for identical configuration and input bytes; file
references inside them are relative to the report directory.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import lowrank, reports, residual_stats, seasonality, trend
from .errors import DegenerateDesign, InputError, SpotvolError
from .ingest import (
    DEFAULT_GAP_LIMIT,
    DayMatrix,
    DstPolicy,
    PriceSeries,
    calendarize,
    parse_price_csv,
)

DEFAULT_RANK = 2


@dataclass
class RunConfig:
    """Analysis parameters shared by every pipeline entry point.

    Defaults follow the reference procedure: rank-2 truncation, 99% trim,
    1000 permutations, seed 0.  The configuration is echoed into every
    report so a run can be reproduced from its outputs alone.
    """

    rank: int = DEFAULT_RANK
    trim: float = residual_stats.DEFAULT_TRIM
    estimator: str = "trimmed"
    permutations: int = seasonality.DEFAULT_PERMUTATIONS
    seed: int = 0
    dst_policy: DstPolicy = field(default_factory=DstPolicy)
    gap_limit: int = DEFAULT_GAP_LIMIT
    input_format: str = "long"
    zone: str | None = None
    jobs: int = 1
    out_dir: Path | None = None

    def echo(self) -> dict:
        return {
            "rank": self.rank,
            "trim_quantile": self.trim,
            "estimator": self.estimator,
            "permutations": self.permutations,
            "seed": self.seed,
            "dst_policy": self.dst_policy.label(),
            "gap_limit": self.gap_limit,
            "input_format": self.input_format,
            "zone": self.zone,
        }


@contextmanager
def _stage(name: str):
    """Tag any escaping pipeline error with the stage it came from."""
    try:
        yield
    except SpotvolError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def load_series(source, config: RunConfig) -> PriceSeries:
    with _stage("ingest"):
        kwargs = {"format": config.input_format}
        if config.zone is not None:
            kwargs["zone"] = config.zone
        return parse_price_csv(source, **kwargs)


def _calendarize(series: PriceSeries, config: RunConfig) -> DayMatrix:
    with _stage("calendarize"):
        return calendarize(series, policy=config.dst_policy, gap_limit=config.gap_limit)


def analyze_year(
    config: RunConfig,
    year_input,
    write_files: bool | None = None,
) -> dict:
    """Run the full single-year analysis and return the report dict.

    year_input may be a CSV path, an already parsed PriceSeries, or a
    DayMatrix.  Files (report JSON plus plot CSVs) are written to
    config.out_dir whenever it is set; the report's "files" section lists
    them by name.
    """
    if write_files is None:
        write_files = config.out_dir is not None
    source_name = None
    if isinstance(year_input, DayMatrix):
        matrix = year_input
    else:
        if isinstance(year_input, PriceSeries):
            series = year_input
        else:
            source_name = Path(year_input).name
            series = load_series(year_input, config)
        matrix = _calendarize(series, config)

    with _stage("decompose"):
        decomposition = lowrank.decompose(matrix)
    with _stage("truncate"):
        model = lowrank.truncate(decomposition, config.rank)
    with _stage("residuals"):
        residuals = lowrank.residual_series(matrix, model)
        analysis = residual_stats.analyze_residuals(
            residuals, q=config.trim, method=config.estimator
        )
    with _stage("seasonality"):
        l_observed = seasonality.angular_momentum(residuals)
        test = seasonality.permutation_test(
            residuals, n_permutations=config.permutations, seed=config.seed
        )

    year = matrix.year
    spectrum_rows = lowrank.spectrum_report({year: decomposition})
    file_names = {
        "spectrum": f"spectrum_{year}.csv",
        "profiles": f"profiles_{year}.csv",
        "amplitudes": f"amplitudes_{year}.csv",
        "probplot": f"probplot_{year}.csv",
        "permutation_histogram": f"permutation_hist_{year}.csv",
    }
    report = {
        "year": year,
        "source": source_name,
        "config": config.echo(),
        "manifest": matrix.manifest,
        "spectrum": {
            "sigma": [float(s) for s in decomposition.singular_values],
            "sigma_normalized": [float(s) for s in decomposition.sigma_normalized],
            "energy_fraction": model.energy_fraction,
            "frobenius_error": model.frobenius_error,
        },
        "residuals": {
            "n": analysis.n,
            "trim_quantile": analysis.trim_quantile,
            "method": analysis.method,
            "mu_hat": analysis.mu_hat,
            "mean_all": analysis.mean_all,
            "cutoff": analysis.cutoff,
            "tail_median": analysis.tail_median,
            "n_imputed_excluded": int(residuals.imputed.sum()),
        },
        "seasonality": {
            "l_observed": test.l_observed,
            "p_value": test.p_value,
            "n_permutations": test.n_permutations,
            "seed": test.seed,
            "permutation_min": test.permutation_values["min"],
            "permutation_max": test.permutation_values["max"],
            "permutation_mean": test.permutation_values["mean"],
        },
        "files": file_names,
    }

    if write_files:
        if config.out_dir is None:
            raise ValueError("write_files requires config.out_dir")
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        reports.write_spectrum_csv(out / file_names["spectrum"], spectrum_rows)
        reports.write_profiles_csv(out / file_names["profiles"], model)
        reports.write_amplitudes_csv(out / file_names["amplitudes"], model)
        reports.write_probplot_csv(out / file_names["probplot"], analysis.probplot)
        reports.write_histogram_csv(
            out / file_names["permutation_histogram"],
            test.permutation_values["histogram"],
        )
        reports.write_json(out / f"year_{year}.json", report)
    return report


def trend_from_year_reports(year_reports: list[dict]) -> tuple[dict, list[dict]]:
    """Fit the multi-year trend from per-year reports.

    Returns (trend report dict, per-year CSV rows).  Needs at least three
    analyzed years; raises DegenerateDesign otherwise.
    """
    year_reports = sorted(year_reports, key=lambda r: r["year"])
    years = [r["year"] for r in year_reports]
    if len(set(years)) != len(years):
        raise InputError(f"duplicate years among the inputs: {years}")
    mu_points = [(r["year"], r["residuals"]["mu_hat"]) for r in year_reports]
    if len(mu_points) < 3:
        raise DegenerateDesign(f"need at least 3 analyzed years, got {len(mu_points)}")
    fit = trend.fit_trend(mu_points)

    tail_points = [
        (r["year"], r["residuals"]["tail_median"])
        for r in year_reports
        if r["residuals"]["tail_median"] is not None
    ]
    tail = trend.tail_trend(tail_points)
    tail_by_year = dict(zip(tail.years, tail.values))

    rows = []
    for year, mu_hat in mu_points:
        rows.append(
            {
                "year": year,
                "mu_hat": mu_hat,
                "fitted": float(fit.fitted(year)),
                "tail_median": tail_by_year.get(year),
            }
        )
    report = {
        "years": [r["year"] for r in year_reports],
        "mu_hat": {str(y): m for y, m in mu_points},
        "slope": fit.slope,
        "intercept": fit.intercept,
        "ci95": [fit.ci95[0], fit.ci95[1]],
        "stderr": fit.stderr,
        "dof": fit.dof,
        "tail_median": {str(y): v for y, v in zip(tail.years, tail.values)},
    }
    return report, rows


def analyze_trend(config: RunConfig, year_inputs: list) -> dict:
    """Analyze several year inputs and fit the multi-year volatility trend.

    Each year is analyzed independently (in parallel up to config.jobs);
    a failing year is recorded under "errors" without aborting the others.
    The combined report (trend fit, per-year summaries, error records) is
    written to trend.json / trend.csv when config.out_dir is set.
    """
    def run_one(item) -> dict:
        return analyze_year(config, item)

    results: list[dict] = []
    errors: list[dict] = []
    jobs = max(1, int(config.jobs))
    if jobs == 1 or len(year_inputs) <= 1:
        outcomes = []
        for item in year_inputs:
            try:
                outcomes.append((item, run_one(item), None))
            except SpotvolError as exc:
                outcomes.append((item, None, exc))
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_one, item) for item in year_inputs]
            outcomes = []
            for item, future in zip(year_inputs, futures):
                try:
                    outcomes.append((item, future.result(), None))
                except SpotvolError as exc:
                    outcomes.append((item, None, exc))

    for item, report, exc in outcomes:
        if exc is None:
            results.append(report)
        else:
            errors.append(
                {
                    "input": Path(item).name if isinstance(item, (str, Path)) else str(item),
                    "stage": exc.stage,
                    "error": type(exc).__name__,
                    "category": "input" if isinstance(exc, InputError) else "analysis",
                    "message": str(exc),
                }
            )

    trend_report, rows = trend_from_year_reports(results) if len(results) >= 3 else (None, [])
    if trend_report is None:
        combined = {
            "config": config.echo(),
            "years": sorted(r["year"] for r in results),
            "trend": None,
            "errors": errors,
        }
        if config.out_dir is not None:
            out = Path(config.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            reports.write_json(out / "trend.json", combined)
        raise DegenerateDesign(
            f"need at least 3 analyzable years, got {len(results)} "
            f"({len(errors)} failed)"
        )

    combined = {
        "config": config.echo(),
        "years": trend_report["years"],
        "trend": trend_report,
        "errors": errors,
        "year_files": {str(r["year"]): f"year_{r['year']}.json" for r in results},
    }
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        reports.write_trend_csv(out / "trend.csv", rows)
        spectra = {}
        for r in results:
            spectra[r["year"]] = [
                {
                    "year": r["year"],
                    "k": k + 1,
                    "sigma": s,
                    "sigma_normalized": sn,
                }
                for k, (s, sn) in enumerate(
                    zip(r["spectrum"]["sigma"], r["spectrum"]["sigma_normalized"])
                )
            ]
        all_rows = [row for year in sorted(spectra) for row in spectra[year]]
        reports.write_spectrum_csv(out / "spectrum.csv", all_rows)
        reports.write_json(out / "trend.json", combined)
    return combined


def load_year_report(path) -> dict:
    """Read a previously written year_<Y>.json report."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read year report {path}: {exc}") from exc
    for key in ("year", "residuals"):
        if key not in doc:
            raise InputError(f"{path} is not a year report (missing {key!r})")
    return doc


def assemble_report(config: RunConfig, report_dir) -> dict:
    """Rebuild trend.json / trend.csv from year_<Y>.json files in a directory."""
    report_dir = Path(report_dir)
    paths = sorted(report_dir.glob("year_*.json"))
    if not paths:
        raise InputError(f"no year_<Y>.json reports found in {report_dir}")
    year_reports = [load_year_report(p) for p in paths]
    # Echo the config the year reports were produced with, not the current
    # invocation's, so the reassembled report matches the original run.
    echo = year_reports[0].get("config") or config.echo()
    for path, rep in zip(paths[1:], year_reports[1:]):
        if rep.get("config", echo) != echo:
            raise InputError(
                f"{path} was produced with a different config than {paths[0].name}"
            )
    trend_report, rows = trend_from_year_reports(year_reports)
    combined = {
        "config": echo,
        "years": trend_report["years"],
        "trend": trend_report,
        "errors": [],
        "year_files": {str(r["year"]): f"year_{r['year']}.json" for r in year_reports},
    }
    out = Path(config.out_dir) if config.out_dir is not None else report_dir
    out.mkdir(parents=True, exist_ok=True)
    reports.write_trend_csv(out / "trend.csv", rows)
    reports.write_json(out / "trend.json", combined)
    return combined
