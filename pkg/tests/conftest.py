"""Shared fixtures and synthetic-data helpers for the test suite."""

from datetime import datetime, timedelta
from zoneinfo import ZoneInfo

import numpy as np
import pytest

import spotvol as sv
from spotvol.synth import (
    cosine_amplitude,
    daily_sine_profile,
    double_peak_profile,
    u_shaped_modulation,
)

# mean of an Exp(3) sample truncated at its 99% quantile c = 3*ln(100):
# mu * (1 - (c/mu) e^{-c/mu} / (1 - e^{-c/mu}))
CLOSED_FORM_TRIMMED_MEAN = 3.0 * (1.0 - np.log(100.0) * 0.01 / 0.99)


def rank2_spec(year=2016, mu=3.0, seed=0, modulation=None):
    """Standard rank-2 synthetic year: double-peak profile with a slow
    seasonal swing plus a weekly oscillation, and Exp(mu) two-sided noise."""
    kwargs = {}
    if modulation is not None:
        kwargs["seasonal_modulation"] = modulation
    return sv.SynthSpec(
        year=year,
        profiles=[
            (double_peak_profile(), cosine_amplitude(1.0, 0.15, 366.0)),
            (daily_sine_profile(), cosine_amplitude(0.0, 6.0, 7.0)),
        ],
        residual_mu=mu,
        seed=seed,
        **kwargs,
    )


def u_shaped(beta):
    return u_shaped_modulation(beta)


def run_chain(spec, rank=2):
    """generate -> calendarize -> decompose -> truncate -> residuals."""
    series = sv.generate(spec)
    matrix = sv.calendarize(series)
    model = sv.truncate(sv.decompose(matrix), rank)
    return sv.residual_series(matrix, model)


def berlin_year_csv(year=2016, price_fn=None):
    """Long-format CSV text for a full Berlin wall-clock year.

    Contains every real local hour once: the spring-forward hour is
    absent, the fall-back hour appears twice (naive wall stamps).
    price_fn maps (index, wall datetime, fold) to a price.
    """
    berlin = ZoneInfo("Europe/Berlin")
    utc = ZoneInfo("UTC")
    if price_fn is None:
        price_fn = lambda i, wall, fold: 20.0 + (i % 24)
    rows = ["timestamp,price"]
    t = datetime(year, 1, 1, tzinfo=berlin)
    end = datetime(year + 1, 1, 1, tzinfo=berlin)
    i = 0
    while t < end:
        local = t.astimezone(berlin)
        wall = local.replace(tzinfo=None)
        rows.append(f"{wall.isoformat()},{price_fn(i, wall, local.fold)}")
        t = (t.astimezone(utc) + timedelta(hours=1)).astimezone(berlin)
        i += 1
    return "\n".join(rows) + "\n"


@pytest.fixture(scope="session")
def noisy_residuals():
    """One standard rank-2 + Exp(3) year pushed through the full chain."""
    return run_chain(rank2_spec(seed=0))


@pytest.fixture(scope="session")
def exp_sample_series():
    """Plain Exp(3) magnitudes wrapped as a ResidualSeries, n = 8784."""
    rng = np.random.default_rng(3000)
    values = rng.exponential(3.0, 8784)
    return sv.ResidualSeries(values=values, imputed=np.zeros(8784, dtype=bool))
