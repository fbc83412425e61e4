"""OLS volatility trend with t-based confidence interval; tail series."""

import numpy as np
import pytest

import spotvol as sv
from spotvol import DegenerateDesign


def test_perfect_line_recovered_exactly():
    points = [(2006 + k, 10.0 - 0.5 * k) for k in range(11)]
    fit = sv.fit_trend(points)
    assert fit.slope == -0.5
    assert fit.stderr == 0.0
    assert fit.ci95 == (-0.5, -0.5)
    assert fit.dof == 9
    assert fit.fitted(2006) == 10.0


def test_three_years_mu_4_3_2_slope_minus_one():
    fit = sv.fit_trend([(2014, 4.0), (2015, 3.0), (2016, 2.0)])
    assert fit.slope == -1.0
    assert fit.ci95 == (-1.0, -1.0)


def test_degenerate_designs_rejected():
    with pytest.raises(DegenerateDesign):
        sv.fit_trend([(2015, 3.0), (2016, 2.0)])
    with pytest.raises(DegenerateDesign):
        sv.fit_trend([(2016, 3.0), (2016, 2.0), (2016, 1.0)])


def test_ci_uses_t_quantile():
    rng = np.random.default_rng(0)
    years = list(range(2006, 2017))
    values = [8.0 - 0.5 * k + rng.normal(0, 0.5) for k in range(11)]
    fit = sv.fit_trend(list(zip(years, values)))
    from scipy import stats

    half = stats.t.ppf(0.975, 9) * fit.stderr
    assert fit.ci95[0] == pytest.approx(fit.slope - half)
    assert fit.ci95[1] == pytest.approx(fit.slope + half)
    assert fit.ci95[0] <= fit.slope <= fit.ci95[1]


def test_affine_equivariance():
    rng = np.random.default_rng(1)
    points = [(2006 + k, 5.0 + rng.normal()) for k in range(8)]
    base = sv.fit_trend(points)
    scaled = sv.fit_trend([(y, 2.0 * v + 3.0) for y, v in points])
    assert scaled.slope == pytest.approx(2.0 * base.slope, rel=1e-12)
    assert scaled.ci95[0] == pytest.approx(2.0 * base.ci95[0] + 0.0, rel=1e-12)
    assert scaled.ci95[1] == pytest.approx(2.0 * base.ci95[1] + 0.0, rel=1e-12)
    flipped = sv.fit_trend([(y, -v) for y, v in points])
    assert flipped.slope == pytest.approx(-base.slope, rel=1e-12)
    assert flipped.ci95[0] == pytest.approx(-base.ci95[1], rel=1e-12)
    assert flipped.ci95[1] == pytest.approx(-base.ci95[0], rel=1e-12)


def test_year_shift_invariance():
    rng = np.random.default_rng(2)
    points = [(2006 + k, 5.0 + rng.normal()) for k in range(9)]
    base = sv.fit_trend(points)
    shifted = sv.fit_trend([(y + 100, v) for y, v in points])
    assert shifted.slope == pytest.approx(base.slope, rel=1e-12)
    assert shifted.stderr == pytest.approx(base.stderr, rel=1e-12)
    width = base.ci95[1] - base.ci95[0]
    assert shifted.ci95[1] - shifted.ci95[0] == pytest.approx(width, rel=1e-12)


def test_residual_orthogonality():
    rng = np.random.default_rng(3)
    years = np.arange(2006, 2017, dtype=float)
    values = 8.0 - 0.5 * (years - 2006) + rng.normal(0, 0.5, 11)
    fit = sv.fit_trend(list(zip(years.astype(int).tolist(), values.tolist())))
    resid = values - fit.fitted(years)
    scale = float(np.abs(values).sum())
    assert abs(resid.sum()) < 1e-9 * scale
    assert abs(resid @ (years - years.mean())) < 1e-9 * scale


def test_tail_trend_orders_by_year():
    series = sv.tail_trend([(2016, 9.0), (2014, 20.0), (2015, 15.0)])
    assert series.years == [2014, 2015, 2016]
    assert series.values == [20.0, 15.0, 9.0]
    assert len(series) == 3


def test_tail_trend_single_pair():
    series = sv.tail_trend([(2016, 9.1)])
    assert series.years == [2016]
    assert series.values == [9.1]


def test_tail_trend_keeps_monotone_shape():
    pairs = [(2006 + k, 20.0 - k) for k in range(6)]
    series = sv.tail_trend(pairs)
    assert all(b < a for a, b in zip(series.values, series.values[1:]))
