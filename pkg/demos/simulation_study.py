"""
Monte-Carlo study of the EM estimator
=====================================

How accurate is the EM estimator on small samples?  For each true
parameter triple this script draws 1000 samples of size k = 30, fits each
one, and summarizes the estimates by bias, RMSE, and an empirical 95%
interval.  It finishes by rendering box-percentile glyphs of the
replicated estimates for one scenario.

Everything is seeded: rerunning the script reproduces every number.
"""

from pathlib import Path

from corrbinom import (
    CBParams,
    Scenario,
    build_quantile_polygon,
    render_svg,
    run_scenario,
    write_polygon_csv,
)

SEED = 20240601
SCENARIOS = [
    (10, 0.5, 0.8),
    (20, 0.5, 0.8),
    (10, 0.2, 0.9),
    (20, 0.2, 0.9),
    (10, 0.5, 0.5),
    (20, 0.5, 0.5),
]

###############################################################################
# Bias and RMSE across scenarios
# ------------------------------
# Estimates of p are nearly unbiased, and their RMSE shrinks as the number
# of trials per observation grows.  Estimates of rho spread wider than
# estimates of p in every scenario.

print(f"{'scenario':<18}{'bias(p)':>12}{'rmse(p)':>10}{'bias(rho)':>12}"
      f"{'rmse(rho)':>11}{'95% interval for rho':>26}")
reports = {}
for n, p, rho in SCENARIOS:
    scenario = Scenario(params=CBParams(n, p, rho), sample_size=30,
                        replications=1000, seed=SEED)
    report = run_scenario(scenario)
    reports[(n, p, rho)] = report
    interval = f"[{report.rho.interval_low:.4f}, {report.rho.interval_high:.4f}]"
    print(f"CB({n}, {p}, {rho})".ljust(18)
          + f"{report.p.bias:>12.6f}{report.p.rmse:>10.5f}"
          + f"{report.rho.bias:>12.6f}{report.rho.rmse:>11.5f}{interval:>26}")

###############################################################################
# Estimator spread, parameter by parameter
# ----------------------------------------
# The sample variance of rho_hat exceeds the sample variance of p_hat in
# each scenario: the mixture weight is the harder parameter.

print("\nvariance of the replicated estimates")
for triple, report in reports.items():
    var_p = report.p.estimates.var(ddof=1)
    var_rho = report.rho.estimates.var(ddof=1)
    print(f"  CB{triple}: var(p_hat) = {var_p:.6f}   var(rho_hat) = {var_rho:.6f}")

###############################################################################
# Box-percentile figure
# ---------------------
# The glyph's width at quantile level q is proportional to min(q, 1 - q),
# so the whole distribution of the 1000 estimates is visible, not just a
# five-number summary.  The SVG and a CSV of the quantile polygons land in
# demos/output/.

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
report = reports[(10, 0.5, 0.8)]
polygons = [
    build_quantile_polygon(report.p.estimates, 201, name="p"),
    build_quantile_polygon(report.rho.estimates, 201, name="rho"),
]
render_svg(polygons, out_dir / "estimates_cb_10_05_08.svg")
write_polygon_csv(polygons, out_dir / "estimates_cb_10_05_08.csv")
print(f"\nwrote {out_dir / 'estimates_cb_10_05_08.svg'}")
print(f"wrote {out_dir / 'estimates_cb_10_05_08.csv'}")
