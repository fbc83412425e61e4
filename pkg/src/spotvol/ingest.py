"""Hourly price file ingestion and calendar normalization.

Parses CSV exports of day-ahead spot prices into a validated PriceSeries
and recasts one calendar year of observations into a 24 x D day matrix
(columns = days), resolving DST deformations (23/25-hour local days),
leap years and short data gaps.
"""

from __future__ import annotations

import calendar
import io
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import IO, Iterable
from zoneinfo import ZoneInfo

import numpy as np

from .errors import (
    DuplicateTimestamp,
    EmptyInput,
    GapTooLong,
    InputError,
    MalformedRow,
    WrongYearSpan,
)

OBSERVED = "observed"
IMPUTED = "imputed"
MISSING = "missing"

DEFAULT_ZONE = "Europe/Berlin"
DEFAULT_GAP_LIMIT = 6

HOURS_PER_DAY = 24


def days_in_year(year: int) -> int:
    return 366 if calendar.isleap(year) else 365


def hours_in_year(year: int) -> int:
    return HOURS_PER_DAY * days_in_year(year)


@dataclass(frozen=True)
class DstPolicy:
    """How 23/25-hour local days are normalized to 24 hour slots.

    spring: fill for the nonexistent spring-forward hour, one of
        "interpolate" (mean of wall-clock neighbors) or "hold" (copy the
        previous hour).  The filled cell is flagged imputed.
    fall:   collapse rule for the doubled fall-back hour, one of "mean",
        "first" or "last".  The collapsed cell stays flagged observed.
    """

    spring: str = "interpolate"
    fall: str = "mean"

    _SPRING = ("interpolate", "hold")
    _FALL = ("mean", "first", "last")

    def __post_init__(self):
        if self.spring not in self._SPRING:
            raise ValueError(f"unknown spring policy {self.spring!r}")
        if self.fall not in self._FALL:
            raise ValueError(f"unknown fall policy {self.fall!r}")

    @classmethod
    def parse(cls, text: str) -> "DstPolicy":
        """Parse a CLI-style ``<spring>-<fall>`` label, e.g. ``interpolate-mean``."""
        spring, sep, fall = text.partition("-")
        if not sep:
            raise ValueError(f"expected '<spring>-<fall>', got {text!r}")
        return cls(spring=spring, fall=fall)

    def label(self) -> str:
        return f"{self.spring}-{self.fall}"


@dataclass
class PriceSeries:
    """Ordered hourly price observations for (at most) one market year.

    Timestamps are wall-clock datetimes carrying the market zone; values
    are EUR/MWh and may be zero or negative.  Entries flagged "missing"
    hold NaN and only mark a known-absent slot (wide-format empty cells).
    """

    timestamps: list[datetime]
    values: np.ndarray
    flags: list[str]
    market_label: str = ""
    year: int | None = None
    zone: str = DEFAULT_ZONE

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not (len(self.timestamps) == len(self.values) == len(self.flags)):
            raise ValueError("timestamps, values and flags must have equal length")

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def observed_count(self) -> int:
        return sum(1 for f in self.flags if f == OBSERVED)


@dataclass
class DayMatrix:
    """A year of hourly values on a 24 x D grid, columns in day order.

    ``imputed`` marks cells that were filled rather than observed; the
    ``manifest`` records ingest counts and the normalization policy.
    """

    values: np.ndarray
    imputed: np.ndarray
    day_labels: list[date]
    year: int
    manifest: dict = field(default_factory=dict)

    @property
    def n_days(self) -> int:
        return self.values.shape[1]

    @property
    def n_hours(self) -> int:
        return self.values.size

    def flatten(self) -> np.ndarray:
        """Values in temporal hour order (day 0 hours 0..23, day 1, ...)."""
        return self.values.ravel(order="F").copy()

    def flatten_imputed(self) -> np.ndarray:
        return self.imputed.ravel(order="F").copy()


# --- CSV parsing ------------------------------------------------------------


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        try:
            data = Path(source).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from exc
    elif isinstance(source, bytes):
        data = source
    elif isinstance(source, io.TextIOBase):
        return source.read()
    elif hasattr(source, "read"):
        data = source.read()
    else:
        raise TypeError(f"cannot read from {type(source).__name__}")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedRow(0, f"input is not UTF-8 text: {exc}") from exc


def _parse_timestamp(text: str, line_no: int) -> datetime:
    text = text.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError as exc:
        raise MalformedRow(line_no, f"bad timestamp {text!r}: {exc}") from exc
    if ts.minute or ts.second or ts.microsecond:
        raise MalformedRow(line_no, f"timestamp {text!r} is not on an hour boundary")
    return ts


def _parse_price(text: str, line_no: int) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise MalformedRow(line_no, f"bad price {text!r}") from exc
    if not np.isfinite(value):
        raise MalformedRow(line_no, f"price {text!r} is not finite")
    return value


def _wall_offsets(wall: datetime, tz: ZoneInfo) -> tuple[timedelta, timedelta]:
    return (
        wall.replace(tzinfo=tz, fold=0).utcoffset(),
        wall.replace(tzinfo=tz, fold=1).utcoffset(),
    )


def wall_exists(wall: datetime, tz: ZoneInfo) -> bool:
    """False for wall times skipped by a spring-forward transition."""
    off0, off1 = _wall_offsets(wall, tz)
    return off0 >= off1


def wall_is_ambiguous(wall: datetime, tz: ZoneInfo) -> bool:
    """True for wall times repeated by a fall-back transition."""
    off0, off1 = _wall_offsets(wall, tz)
    return off0 > off1


def _split_csv_line(line: str) -> list[str]:
    # inputs are plain comma-separated numbers/timestamps, never quoted
    return [cell.strip() for cell in line.split(",")]


def _parse_long(lines: list[str], tz: ZoneInfo) -> list[tuple[datetime, float, str]]:
    header = [h.lower() for h in _split_csv_line(lines[0])]
    if header != ["timestamp", "price"]:
        raise MalformedRow(1, f"expected header 'timestamp,price', got {lines[0]!r}")

    entries: list[tuple[datetime, float, str]] = []
    naive_seen: dict[datetime, int] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = _split_csv_line(line)
        if len(cells) != 2:
            raise MalformedRow(line_no, f"expected 2 fields, got {len(cells)}")
        ts = _parse_timestamp(cells[0], line_no)
        value = _parse_price(cells[1], line_no)
        if ts.tzinfo is None:
            # naive stamps are market wall time; a repeated wall hour is the
            # second leg of a fall-back transition
            repeats = naive_seen.get(ts, 0)
            naive_seen[ts] = repeats + 1
            ts = ts.replace(tzinfo=tz, fold=1 if repeats else 0)
        entries.append((ts, value, OBSERVED))
    return entries


def _parse_wide(lines: list[str], tz: ZoneInfo) -> list[tuple[datetime, float, str]]:
    header = [h.lower() for h in _split_csv_line(lines[0])]
    expected = ["date"] + [f"h{i}" for i in range(1, 25)]
    if header != expected:
        raise MalformedRow(1, "expected header 'date,h1,...,h24'")

    entries: list[tuple[datetime, float, str]] = []
    seen_dates: set[date] = set()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = _split_csv_line(line)
        if len(cells) != 25:
            raise MalformedRow(line_no, f"expected 25 fields, got {len(cells)}")
        try:
            day = date.fromisoformat(cells[0])
        except ValueError as exc:
            raise MalformedRow(line_no, f"bad date {cells[0]!r}") from exc
        if day in seen_dates:
            raise DuplicateTimestamp(f"duplicate date row {day.isoformat()} at line {line_no}")
        seen_dates.add(day)
        for hour, cell in enumerate(cells[1:]):
            wall = datetime(day.year, day.month, day.day, hour)
            exists = wall_exists(wall, tz)
            if not cell:
                entries.append((wall.replace(tzinfo=tz), np.nan, MISSING))
            elif not exists:
                raise MalformedRow(
                    line_no,
                    f"{wall.isoformat()} does not exist in local time (spring forward)",
                )
            else:
                entries.append((wall.replace(tzinfo=tz), _parse_price(cell, line_no), OBSERVED))
    return entries


def parse_price_csv(
    source,
    format: str = "long",
    market_label: str = "",
    zone: str = DEFAULT_ZONE,
) -> PriceSeries:
    """Parse an hourly price CSV into a time-sorted PriceSeries.

    Long format is ``timestamp,price`` with ISO-8601 timestamps (offset or
    market wall time); wide format is ``date,h1,...,h24`` with empty cells
    marking missing hours.  Zero and negative prices are legal.

    Raises MalformedRow, DuplicateTimestamp or EmptyInput.
    """
    if format not in ("long", "wide"):
        raise ValueError(f"unknown format {format!r}")
    tz = ZoneInfo(zone)
    text = _read_text(source)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EmptyInput("no header row")

    if format == "long":
        entries = _parse_long(lines, tz)
    else:
        entries = _parse_wide(lines, tz)
    if not any(flag == OBSERVED for _, _, flag in entries):
        raise EmptyInput("no data rows")

    # sort by absolute instant, breaking ties (imaginary DST labels) by wall time
    entries.sort(key=lambda e: (e[0], e[0].replace(tzinfo=None)))
    last_instant = None
    for ts, _, flag in entries:
        if flag != OBSERVED:
            continue
        instant = ts.astimezone(ZoneInfo("UTC"))
        if last_instant is not None and instant == last_instant:
            raise DuplicateTimestamp(f"duplicate timestamp {ts.isoformat()}")
        last_instant = instant

    timestamps = [ts for ts, _, _ in entries]
    values = np.array([v for _, v, _ in entries], dtype=float)
    flags = [f for _, _, f in entries]
    wall_years = {_wall_in_zone(ts, tz).year for ts in timestamps}
    year = wall_years.pop() if len(wall_years) == 1 else None
    return PriceSeries(timestamps, values, flags, market_label, year, zone)


# --- calendarization --------------------------------------------------------


def _wall_in_zone(ts: datetime, tz: ZoneInfo) -> datetime:
    """Wall-clock view of a timestamp in the market zone (naive, plus fold)."""
    if ts.tzinfo is None:
        return ts
    if isinstance(ts.tzinfo, ZoneInfo) and str(ts.tzinfo) == str(tz):
        return ts.replace(tzinfo=None).replace(fold=ts.fold)
    local = ts.astimezone(tz)
    return local.replace(tzinfo=None).replace(fold=local.fold)


def calendarize(
    series: PriceSeries,
    policy: DstPolicy | None = None,
    gap_limit: int = DEFAULT_GAP_LIMIT,
) -> DayMatrix:
    """Recast one calendar year of hourly observations as a 24 x D matrix.

    The spring-forward hour is filled per policy and flagged imputed; the
    doubled fall-back hour is collapsed per policy and stays observed.  Any
    other run of up to ``gap_limit`` missing hours is linearly interpolated
    (flagged imputed); longer runs raise GapTooLong.
    """
    policy = policy or DstPolicy()
    tz = ZoneInfo(series.zone)

    walls = [_wall_in_zone(ts, tz) for ts in series.timestamps]
    observed = [
        (wall, value)
        for wall, value, flag in zip(walls, series.values, series.flags)
        if flag == OBSERVED
    ]
    if not observed:
        raise WrongYearSpan("series holds no observed values")

    years = {wall.year for wall, _ in observed}
    if len(years) > 1:
        raise WrongYearSpan(f"series spans several years: {sorted(years)}")
    year = years.pop()
    if series.year is not None and series.year != year:
        raise WrongYearSpan(f"series labeled {series.year} but data lie in {year}")

    n_days = days_in_year(year)
    jan1 = date(year, 1, 1)
    day_labels = [jan1 + timedelta(days=d) for d in range(n_days)]

    values = np.full((HOURS_PER_DAY, n_days), np.nan)
    counts = np.zeros((HOURS_PER_DAY, n_days), dtype=int)
    first = np.full((HOURS_PER_DAY, n_days), np.nan)
    last = np.full((HOURS_PER_DAY, n_days), np.nan)
    sums = np.zeros((HOURS_PER_DAY, n_days))

    for wall, value in observed:
        d = (wall.date() - jan1).days
        h = wall.hour
        if counts[h, d] == 0:
            first[h, d] = value
        last[h, d] = value
        sums[h, d] += value
        counts[h, d] += 1

    fall_collapsed = 0
    for h, d in zip(*np.nonzero(counts)):
        c = counts[h, d]
        if c == 1:
            values[h, d] = first[h, d]
            continue
        wall = datetime.combine(day_labels[d], datetime.min.time()) + timedelta(hours=int(h))
        if c > 2 or not wall_is_ambiguous(wall, tz):
            raise DuplicateTimestamp(
                f"wall slot {wall.isoformat()} observed {c} times but is not a DST fall-back hour"
            )
        if policy.fall == "mean":
            values[h, d] = sums[h, d] / 2.0
        elif policy.fall == "first":
            values[h, d] = first[h, d]
        else:
            values[h, d] = last[h, d]
        fall_collapsed += 1

    imputed = np.zeros((HOURS_PER_DAY, n_days), dtype=bool)
    flat = values.ravel(order="F")
    flat_imputed = imputed.ravel(order="F")
    n = flat.size

    def slot_wall(idx: int) -> datetime:
        d, h = divmod(idx, HOURS_PER_DAY)
        return datetime.combine(day_labels[d], datetime.min.time()) + timedelta(hours=h)

    missing_idx = np.nonzero(np.isnan(flat))[0]
    n_missing_input = len(missing_idx)
    spring_filled = 0
    gap_hours = 0

    i = 0
    while i < len(missing_idx):
        j = i
        while j + 1 < len(missing_idx) and missing_idx[j + 1] == missing_idx[j] + 1:
            j += 1
        run = missing_idx[i : j + 1]
        spring_slots = [idx for idx in run if not wall_exists(slot_wall(int(idx)), tz)]
        effective = len(run) - len(spring_slots)
        if effective > gap_limit:
            raise GapTooLong(slot_wall(int(run[0])).isoformat(), effective)

        lo, hi = int(run[0]), int(run[-1])
        if len(run) == 1 and spring_slots and policy.spring == "hold" and lo > 0:
            flat[lo] = flat[lo - 1]
        elif lo == 0:
            flat[run] = flat[hi + 1]
        elif hi == n - 1:
            flat[run] = flat[lo - 1]
        else:
            left, right = flat[lo - 1], flat[hi + 1]
            steps = np.arange(1, len(run) + 1, dtype=float) / (len(run) + 1)
            flat[run] = left + steps * (right - left)
        flat_imputed[run] = True
        spring_filled += len(spring_slots)
        gap_hours += effective
        i = j + 1

    values = flat.reshape((n_days, HOURS_PER_DAY)).T
    imputed = flat_imputed.reshape((n_days, HOURS_PER_DAY)).T

    manifest = {
        "year": year,
        "zone": series.zone,
        "market_label": series.market_label,
        "n_slots": int(n),
        "n_observed": int(n - imputed.sum()),
        "n_imputed": int(imputed.sum()),
        "n_missing_input": int(n_missing_input),
        "n_dst_spring_filled": int(spring_filled),
        "n_dst_fall_collapsed": int(fall_collapsed),
        "gap_hours_filled": int(gap_hours),
        "policy": {
            "spring": policy.spring,
            "fall": policy.fall,
            "gap_limit": int(gap_limit),
        },
    }
    return DayMatrix(values, imputed, day_labels, year, manifest)
