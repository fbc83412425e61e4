"""Is volatility drifting across a decade?

Fit the bulk residual scale mu_hat for each year, then regress those
scales on the calendar year.  The slope says how fast the typical hourly
surprise is growing or shrinking, and the confidence interval says how
sure we can be.  Here we plant a known downward drift and recover it.
"""

import numpy as np

import spotvol as sv


def year_mu(year, mu_true, seed):
    days = sv.days_in_year(year)
    spec = sv.SynthSpec(
        year=year,
        profiles=[
            (sv.double_peak_profile(), sv.cosine_amplitude(1.0, 0.15, float(days))),
        ],
        residual_mu=mu_true,
        seed=seed,
    )
    matrix = sv.calendarize(sv.generate(spec))
    model = sv.truncate(sv.decompose(matrix), 2)
    resid = sv.residual_series(matrix, model)
    return sv.fit_bulk_exponential(resid, q=0.99).mu_hat


def main():
    years = list(range(2006, 2017))
    planted_slope = -0.25
    points = []
    print("per-year bulk scale (planted trend -0.25 per year):")
    for i, year in enumerate(years):
        mu_true = 6.0 + planted_slope * i
        mu_hat = year_mu(year, mu_true, seed=year)
        points.append((year, mu_hat))
        bar = "#" * int(8 * mu_hat)
        print(f"  {year}: true {mu_true:.3f}  fitted {mu_hat:.3f}  {bar}")

    trend = sv.fit_trend(points)
    print(f"\nslope: {trend.slope:+.4f} per year")
    print(f"95% CI: ({trend.ci95[0]:+.4f}, {trend.ci95[1]:+.4f})")
    print(f"stderr: {trend.stderr:.4f}, dof: {trend.dof}")
    covered = trend.ci95[0] <= planted_slope <= trend.ci95[1]
    print(f"interval covers the planted slope: {covered}")

    print("\nfitted line vs data:")
    for year, mu_hat in points:
        print(f"  {year}: data {mu_hat:.3f}  line {trend.fitted(year):.3f}")


if __name__ == "__main__":
    main()
