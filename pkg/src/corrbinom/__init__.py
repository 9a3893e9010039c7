"""Maximum-likelihood estimation for the correlated binomial distribution.

CB(n, p, rho) mixes Binomial(n, p) with a two-point distribution on
{0, n}; ``rho`` is the mixture weight standing in for positive trial
correlation.  The package provides the distribution itself
(:mod:`corrbinom.model`), an EM maximum-likelihood estimator
(:mod:`corrbinom.em`), a brute-force grid-search cross-check
(:mod:`corrbinom.gridsearch`), a Monte-Carlo bias/RMSE study harness
(:mod:`corrbinom.simulate`), box-percentile figure output
(:mod:`corrbinom.boxpct`), and a command-line interface
(``corrbinom fit|simulate|pmf|sample|plot``).
"""

from .boxpct import QuantilePolygon, build_quantile_polygon, render_svg, write_polygon_csv
from .em import EMConfig, EMResult, FitDegeneracyError, e_step, em_fit, m_step, q_function
from .gridsearch import GridResult, GridSpec, grid_mle, log_likelihood_grid
from .model import (
    CBParams,
    Dataset,
    binomial_pmf,
    cb_pmf,
    log_binomial_coeff,
    log_likelihood,
    pmf_table,
    sample,
)
from .simulate import (
    ParameterSummary,
    Scenario,
    ScenarioReport,
    bias,
    child_seed,
    percentile_interval,
    rmse,
    run_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "CBParams",
    "Dataset",
    "EMConfig",
    "EMResult",
    "FitDegeneracyError",
    "GridResult",
    "GridSpec",
    "ParameterSummary",
    "QuantilePolygon",
    "Scenario",
    "ScenarioReport",
    "bias",
    "binomial_pmf",
    "build_quantile_polygon",
    "cb_pmf",
    "child_seed",
    "e_step",
    "em_fit",
    "grid_mle",
    "log_binomial_coeff",
    "log_likelihood",
    "log_likelihood_grid",
    "m_step",
    "percentile_interval",
    "pmf_table",
    "q_function",
    "render_svg",
    "rmse",
    "run_scenario",
    "sample",
    "write_polygon_csv",
]
