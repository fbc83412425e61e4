"""Synthetic hourly price generator with known ground truth.

Builds a year of prices as a low-rank signal (daily profiles times
day-amplitude curves) plus two-sided exponential noise, optionally with a
seasonal volatility modulation.  Because every ingredient is known, the
output serves as an oracle for the estimators: the noiseless part has
exactly the requested rank and the absolute residual law is exponential
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidSpec
from .ingest import OBSERVED, PriceSeries, days_in_year

Amplitude = Callable[[np.ndarray], np.ndarray]
Modulation = Callable[[np.ndarray], np.ndarray]


def constant_amplitude(level: float) -> Amplitude:
    return lambda d: np.full_like(d, float(level), dtype=float)


def linear_amplitude(start: float, end: float) -> Amplitude:
    def f(d: np.ndarray) -> np.ndarray:
        span = max(len(d) - 1, 1)
        return start + (end - start) * (d - d[0]) / span

    return f


def cosine_amplitude(
    mean: float, amplitude: float, period_days: float, phase_days: float = 0.0
) -> Amplitude:
    def f(d: np.ndarray) -> np.ndarray:
        return mean + amplitude * np.cos(2.0 * np.pi * (d - phase_days) / period_days)

    return f


def flat_modulation() -> Modulation:
    return lambda d: np.ones_like(d, dtype=float)


def u_shaped_modulation(beta: float) -> Modulation:
    """1 + beta * x(d)^2 with x(d) = (d - D/2)/(D/2): high at year edges."""

    def f(d: np.ndarray) -> np.ndarray:
        d_m = len(d) / 2.0
        x = (d - d_m) / d_m
        return 1.0 + beta * x * x

    return f


def flat_profile() -> np.ndarray:
    return np.ones(24)


def double_peak_profile() -> np.ndarray:
    """Base daily price shape with morning and late-afternoon peaks."""
    h = np.arange(24, dtype=float)
    morning = 8.0 * np.exp(-0.5 * ((h - 8.0) / 2.0) ** 2)
    evening = 10.0 * np.exp(-0.5 * ((h - 19.0) / 2.5) ** 2)
    return 30.0 + morning + evening


def daily_sine_profile() -> np.ndarray:
    h = np.arange(24, dtype=float)
    return np.sin(2.0 * np.pi * h / 24.0)


PROFILE_PRESETS = {
    "flat": flat_profile,
    "double_peak": double_peak_profile,
    "daily_sine": daily_sine_profile,
}


@dataclass
class SynthSpec:
    """Recipe for one synthetic year.

    profiles pairs a 24-vector hourly shape with a day-amplitude function
    (called on the 1-based day-index array); their outer-product sum is
    the noiseless signal, of rank len(profiles) when the pairs are
    independent.  residual_mu scales the exponential noise magnitudes,
    seasonal_modulation multiplies that scale per day, and sign_mix is
    the probability of a negative noise sign.
    """

    year: int
    profiles: list[tuple[np.ndarray, Amplitude]]
    residual_mu: float
    seasonal_modulation: Modulation = field(default_factory=flat_modulation)
    sign_mix: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not self.profiles:
            raise InvalidSpec("profiles must be nonempty")
        checked = []
        for i, (hourly, amp) in enumerate(self.profiles):
            vec = np.asarray(hourly, dtype=float)
            if vec.shape != (24,):
                raise InvalidSpec(f"profile {i}: hourly vector must have 24 entries")
            if not np.all(np.isfinite(vec)):
                raise InvalidSpec(f"profile {i}: hourly vector must be finite")
            if not callable(amp):
                raise InvalidSpec(f"profile {i}: amplitude must be callable")
            checked.append((vec, amp))
        self.profiles = checked
        if not (np.isfinite(self.residual_mu) and self.residual_mu >= 0):
            raise InvalidSpec(f"residual_mu must be finite and >= 0, got {self.residual_mu}")
        if not (0.0 <= self.sign_mix <= 1.0):
            raise InvalidSpec(f"sign_mix must lie in [0, 1], got {self.sign_mix}")
        if not (1 <= self.year <= 9999):
            raise InvalidSpec(f"year out of range: {self.year}")


def generate(spec: SynthSpec) -> PriceSeries:
    """Generate the hourly PriceSeries a spec describes.

    Deterministic per seed.  Timestamps are hourly UTC (no DST), so the
    noiseless signal calendarizes to an exactly rank-len(profiles)
    matrix.
    """
    n_days = days_in_year(spec.year)
    d = np.arange(1, n_days + 1, dtype=float)

    signal = np.zeros((24, n_days))
    for hourly, amp in spec.profiles:
        values = np.asarray(amp(d), dtype=float)
        if values.shape != d.shape:
            raise InvalidSpec(f"amplitude function returned shape {values.shape}")
        signal += np.outer(hourly, values)

    mod = np.asarray(spec.seasonal_modulation(d), dtype=float)
    if mod.shape != d.shape:
        raise InvalidSpec(f"modulation function returned shape {mod.shape}")
    if not np.all(np.isfinite(mod)) or np.any(mod < 0):
        raise InvalidSpec("modulation must be finite and nonnegative")

    rng = np.random.default_rng(spec.seed)
    scale = spec.residual_mu * np.broadcast_to(mod, (24, n_days))
    magnitudes = rng.exponential(scale)
    signs = np.where(rng.random((24, n_days)) < spec.sign_mix, -1.0, 1.0)
    values = signal + signs * magnitudes

    start = datetime(spec.year, 1, 1, tzinfo=timezone.utc)
    n = 24 * n_days
    timestamps = [start + timedelta(hours=i) for i in range(n)]
    return PriceSeries(
        timestamps=timestamps,
        values=values.ravel(order="F"),
        flags=[OBSERVED] * n,
        market_label=f"synthetic-{spec.year}",
        year=spec.year,
        zone="UTC",
    )


# --- JSON spec form ---------------------------------------------------------


def _amplitude_from_json(doc: dict, where: str) -> Amplitude:
    kind = doc.get("kind")
    try:
        if kind == "constant":
            return constant_amplitude(float(doc["level"]))
        if kind == "linear":
            return linear_amplitude(float(doc["start"]), float(doc["end"]))
        if kind == "cosine":
            return cosine_amplitude(
                float(doc["mean"]),
                float(doc["amplitude"]),
                float(doc["period_days"]),
                float(doc.get("phase_days", 0.0)),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"{where}: bad amplitude parameters: {exc}") from exc
    raise InvalidSpec(f"{where}: unknown amplitude kind {kind!r}")


def _modulation_from_json(doc: dict) -> Modulation:
    kind = doc.get("kind", "flat")
    if kind == "flat":
        return flat_modulation()
    if kind == "u_shaped":
        try:
            return u_shaped_modulation(float(doc["beta"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"bad u_shaped modulation: {exc}") from exc
    raise InvalidSpec(f"unknown modulation kind {kind!r}")


def _hourly_from_json(value, where: str) -> np.ndarray:
    if isinstance(value, str):
        preset = PROFILE_PRESETS.get(value)
        if preset is None:
            raise InvalidSpec(f"{where}: unknown profile preset {value!r}")
        return preset()
    if isinstance(value, Sequence) and len(value) == 24:
        try:
            return np.asarray(value, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidSpec(f"{where}: hourly values must be numbers") from exc
    raise InvalidSpec(f"{where}: hourly must be a preset name or a list of 24 numbers")


def spec_from_json(doc: dict) -> SynthSpec:
    """Build a SynthSpec from its JSON document form.

    Shape:
        {"year": 2016, "residual_mu": 3.0, "seed": 0, "sign_mix": 0.5,
         "profiles": [{"hourly": "double_peak" | [24 numbers],
                       "amplitude": {"kind": "constant", "level": 1.0}}, ...],
         "seasonal_modulation": {"kind": "flat"} | {"kind": "u_shaped", "beta": 2.0}}
    """
    if not isinstance(doc, dict):
        raise InvalidSpec("spec document must be a JSON object")
    unknown = set(doc) - {
        "year", "profiles", "residual_mu", "seasonal_modulation", "sign_mix", "seed",
    }
    if unknown:
        raise InvalidSpec(f"unknown spec fields: {sorted(unknown)}")
    for name in ("year", "profiles", "residual_mu"):
        if name not in doc:
            raise InvalidSpec(f"spec field {name!r} is required")
    if not isinstance(doc["profiles"], list) or not doc["profiles"]:
        raise InvalidSpec("profiles must be a nonempty list")

    profiles = []
    for i, item in enumerate(doc["profiles"]):
        if not isinstance(item, dict) or "hourly" not in item or "amplitude" not in item:
            raise InvalidSpec(f"profile {i}: need 'hourly' and 'amplitude'")
        hourly = _hourly_from_json(item["hourly"], f"profile {i}")
        amp = _amplitude_from_json(item["amplitude"], f"profile {i}")
        profiles.append((hourly, amp))

    try:
        year = int(doc["year"])
        residual_mu = float(doc["residual_mu"])
        sign_mix = float(doc.get("sign_mix", 0.5))
        seed = int(doc.get("seed", 0))
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad scalar field: {exc}") from exc
    modulation = _modulation_from_json(doc.get("seasonal_modulation", {"kind": "flat"}))
    return SynthSpec(
        year=year,
        profiles=profiles,
        residual_mu=residual_mu,
        seasonal_modulation=modulation,
        sign_mix=sign_mix,
        seed=seed,
    )
