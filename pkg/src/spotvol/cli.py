"""Command-line entry points.

Subcommands:
    ingest-check   parse and calendarize one file, print the manifest
    analyze-year   full single-year analysis, write report + plot CSVs
    analyze-trend  analyze several years and fit the volatility trend
    synth          generate a synthetic year from a JSON spec
    report         rebuild the trend report from existing year reports

Exit codes: 0 on success, 2 for input/configuration errors, 3 for
numerical or statistical failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import AnalysisError, InputError
from .ingest import DEFAULT_GAP_LIMIT, DEFAULT_ZONE, DstPolicy
from .pipeline import (
    DEFAULT_RANK,
    RunConfig,
    analyze_trend,
    analyze_year,
    assemble_report,
    load_series,
    _calendarize,
)
from .reports import series_to_long_csv
from .residual_stats import DEFAULT_TRIM
from .seasonality import DEFAULT_PERMUTATIONS
from .synth import generate, spec_from_json

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ANALYSIS = 3


def _trim_value(text: str) -> float:
    try:
        q = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (0.5 < q <= 1.0):
        raise argparse.ArgumentTypeError(f"trim quantile must lie in (0.5, 1], got {q}")
    return q


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _nonnegative_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {n}")
    return n


def _dst_policy(text: str) -> DstPolicy:
    try:
        return DstPolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_ingest_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--format", choices=("long", "wide"), default="long",
        help="input CSV layout (default: long, header timestamp,price)",
    )
    parser.add_argument(
        "--zone", default=DEFAULT_ZONE,
        help=f"market time zone for wall-clock timestamps (default: {DEFAULT_ZONE})",
    )
    parser.add_argument(
        "--dst-policy", type=_dst_policy, default=DstPolicy(), metavar="SPRING-FALL",
        help="DST handling, e.g. interpolate-mean (default), hold-first, interpolate-last",
    )
    parser.add_argument(
        "--gap-limit", type=_nonnegative_int, default=DEFAULT_GAP_LIMIT, metavar="G",
        help=f"longest gap (hours) filled by interpolation (default: {DEFAULT_GAP_LIMIT})",
    )


def _add_analysis_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--rank", type=_positive_int, default=DEFAULT_RANK,
        help=f"truncation rank of the seasonal model (default: {DEFAULT_RANK})",
    )
    parser.add_argument(
        "--trim", type=_trim_value, default=DEFAULT_TRIM, metavar="Q",
        help=f"bulk fraction fitted by the exponential (default: {DEFAULT_TRIM})",
    )
    parser.add_argument(
        "--estimator", choices=("trimmed", "censored"), default="trimmed",
        help="bulk scale estimator: plain trimmed mean (default) or censored-data MLE",
    )
    parser.add_argument(
        "--permutations", type=_positive_int, default=DEFAULT_PERMUTATIONS, metavar="N",
        help=f"permutations for the seasonality test (default: {DEFAULT_PERMUTATIONS})",
    )
    parser.add_argument(
        "--seed", type=_nonnegative_int, default=0,
        help="base seed for the permutation generator (default: 0)",
    )


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        rank=getattr(args, "rank", DEFAULT_RANK),
        trim=getattr(args, "trim", DEFAULT_TRIM),
        estimator=getattr(args, "estimator", "trimmed"),
        permutations=getattr(args, "permutations", DEFAULT_PERMUTATIONS),
        seed=getattr(args, "seed", 0),
        dst_policy=getattr(args, "dst_policy", DstPolicy()),
        gap_limit=getattr(args, "gap_limit", DEFAULT_GAP_LIMIT),
        input_format=getattr(args, "format", "long"),
        zone=getattr(args, "zone", None),
        jobs=getattr(args, "jobs", 1),
        out_dir=Path(args.out) if getattr(args, "out", None) else None,
    )


def _cmd_ingest_check(args) -> int:
    config = _config_from_args(args)
    series = load_series(args.input, config)
    matrix = _calendarize(series, config)
    print(json.dumps(matrix.manifest, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_analyze_year(args) -> int:
    config = _config_from_args(args)
    report = analyze_year(config, args.input)
    res = report["residuals"]
    season = report["seasonality"]
    tail = res["tail_median"]
    print(
        f"year {report['year']}: mu_hat={res['mu_hat']:.4f}"
        f" tail_median={'n/a' if tail is None else format(tail, '.4f')}"
        f" l_observed={season['l_observed']:.4f} p_value={season['p_value']:.6f}"
    )
    report_path = Path(config.out_dir) / f"year_{report['year']}.json"
    print(f"report: {report_path}")
    return EXIT_OK


def _cmd_analyze_trend(args) -> int:
    config = _config_from_args(args)
    combined = analyze_trend(config, args.inputs)
    fit = combined["trend"]
    print(
        f"years {fit['years'][0]}..{fit['years'][-1]} (n={len(fit['years'])}):"
        f" slope={fit['slope']:.4f} EUR/MWh/yr"
        f" ci95=({fit['ci95'][0]:.4f}, {fit['ci95'][1]:.4f})"
    )
    print(f"report: {Path(config.out_dir) / 'trend.json'}")
    for record in combined["errors"]:
        print(
            f"failed: {record['input']} [{record['stage']}] {record['message']}",
            file=sys.stderr,
        )
    if combined["errors"]:
        if any(r["category"] == "input" for r in combined["errors"]):
            return EXIT_INPUT
        return EXIT_ANALYSIS
    return EXIT_OK


def _cmd_synth(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read spec {args.spec}: {exc}") from exc
    series = generate(spec_from_json(doc))
    text = series_to_long_csv(series)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {len(series)} hours to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_report(args) -> int:
    config = _config_from_args(args)
    combined = assemble_report(config, args.dir)
    fit = combined["trend"]
    print(
        f"years {fit['years'][0]}..{fit['years'][-1]} (n={len(fit['years'])}):"
        f" slope={fit['slope']:.4f} EUR/MWh/yr"
        f" ci95=({fit['ci95'][0]:.4f}, {fit['ci95'][1]:.4f})"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spotvol",
        description="Volatility analysis of hourly day-ahead electricity prices "
        "via low-rank deseasonalization.",
    )
    parser.add_argument("--version", action="version", version=f"spotvol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate one input file and print its manifest")
    p.add_argument("input", help="price CSV file")
    _add_ingest_flags(p)
    p.set_defaults(func=_cmd_ingest_check)

    p = sub.add_parser("analyze-year", help="run the full analysis for one year")
    p.add_argument("input", help="price CSV file covering one calendar year")
    p.add_argument("--out", required=True, help="output directory for report and plot CSVs")
    _add_ingest_flags(p)
    _add_analysis_flags(p)
    p.set_defaults(func=_cmd_analyze_year)

    p = sub.add_parser("analyze-trend", help="analyze several years and fit the trend")
    p.add_argument("inputs", nargs="+", metavar="input", help="one price CSV per year")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--jobs", type=_positive_int, default=1,
        help="years analyzed concurrently (default: 1)",
    )
    _add_ingest_flags(p)
    _add_analysis_flags(p)
    p.set_defaults(func=_cmd_analyze_trend)

    p = sub.add_parser("synth", help="generate a synthetic year from a JSON spec")
    p.add_argument("spec", help="synthetic-year spec (JSON)")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("report", help="rebuild trend report from year_<Y>.json files")
    p.add_argument("dir", help="directory holding year_<Y>.json reports")
    p.add_argument("--out", help="output directory (default: same as input dir)")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        stage = f" [{exc.stage}]" if exc.stage else ""
        print(f"error{stage}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalysisError as exc:
        stage = f" [{exc.stage}]" if exc.stage else ""
        print(f"error{stage}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
