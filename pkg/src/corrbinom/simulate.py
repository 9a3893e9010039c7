"""Monte-Carlo study harness: replicate sampling + fitting, then summarize.

A scenario fixes true parameters, a sample size, a replication count, EM
controls, and a master seed.  Each replication draws its own dataset from
a deterministically derived child seed, fits it by EM, and contributes its
estimates to bias / RMSE / percentile-interval summaries per parameter.
Replications are independent, and the aggregation is keyed by replication
index, so a scenario report is a pure function of the scenario.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .em import EMConfig, FitDegeneracyError, em_fit
from .model import CBParams, sample

__all__ = [
    "ParameterSummary",
    "Scenario",
    "ScenarioReport",
    "bias",
    "child_seed",
    "percentile_interval",
    "rmse",
    "run_scenario",
]


@dataclass(frozen=True)
class Scenario:
    """One simulation configuration."""

    params: CBParams
    sample_size: int
    replications: int
    seed: int
    em_config: EMConfig = EMConfig()

    def __post_init__(self):
        if not (isinstance(self.sample_size, (int, np.integer)) and self.sample_size >= 1):
            raise ValueError(f"sample_size must be an integer >= 1, got {self.sample_size!r}")
        if not (isinstance(self.replications, (int, np.integer)) and self.replications >= 1):
            raise ValueError(f"replications must be an integer >= 1, got {self.replications!r}")


@dataclass(frozen=True)
class ParameterSummary:
    """Replication summary for a single parameter."""

    truth: float
    bias: float
    rmse: float
    interval_low: float
    interval_high: float
    estimates: np.ndarray

    def __post_init__(self):
        est = np.array(self.estimates, dtype=float)
        est.flags.writeable = False
        object.__setattr__(self, "estimates", est)


@dataclass(frozen=True)
class ScenarioReport:
    """Per-parameter summaries plus the count of replications whose fit
    did not converge (those estimates still enter the aggregates)."""

    scenario: Scenario
    p: ParameterSummary
    rho: ParameterSummary
    degenerate_count: int


def bias(estimates, truth: float) -> float:
    """Mean of the estimates minus the true value."""
    est = _as_nonempty_array(estimates)
    return float(est.mean() - truth)


def rmse(estimates, truth: float) -> float:
    """Root mean squared deviation of the estimates from the true value."""
    est = _as_nonempty_array(estimates)
    return float(np.sqrt(np.mean((est - truth) ** 2)))


def percentile_interval(estimates, level: float) -> tuple[float, float]:
    """Empirical central interval covering ``level`` of the estimates.

    Endpoints are the (1 - level)/2 and 1 - (1 - level)/2 quantiles under
    the inclusive linear-interpolation definition (the quantile at q
    interpolates between order statistics at rank q * (len - 1)); the
    definition is pinned so results reproduce across implementations.
    """
    est = _as_nonempty_array(estimates)
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie strictly inside (0, 1), got {level!r}")
    tail = (1.0 - level) / 2.0
    low = np.quantile(est, tail, method="linear")
    high = np.quantile(est, 1.0 - tail, method="linear")
    return float(low), float(high)


def _as_nonempty_array(estimates) -> np.ndarray:
    est = np.asarray(estimates, dtype=float)
    if est.size == 0:
        raise ValueError("estimates must be non-empty")
    return est


def child_seed(seed: int, replication: int) -> int:
    """Sampling seed for one replication.

    Derived by spawning a numpy ``SeedSequence`` keyed on the replication
    index, so the mapping is a fixed hash of (seed, replication): child
    streams are independent and do not depend on execution order.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(replication,))
    return int(ss.generate_state(1, np.uint64)[0])


def run_scenario(scenario: Scenario) -> ScenarioReport:
    """Run every replication of the scenario and aggregate the estimates.

    A replication whose fit stops at the iteration cap is counted in
    ``degenerate_count`` but its estimates stay in the aggregates.  A
    replication that raises :class:`FitDegeneracyError` is counted and
    skipped; if every replication fails the last error propagates.
    """
    p_hats: list[float] = []
    rho_hats: list[float] = []
    degenerate = 0
    failures = 0
    last_error: FitDegeneracyError | None = None
    for r in range(scenario.replications):
        data = sample(scenario.params, scenario.sample_size, child_seed(scenario.seed, r))
        try:
            result = em_fit(data, scenario.em_config)
        except FitDegeneracyError as exc:
            degenerate += 1
            failures += 1
            last_error = exc
            continue
        if not result.converged:
            degenerate += 1
        p_hats.append(result.p_hat)
        rho_hats.append(result.rho_hat)
    if failures == scenario.replications:
        raise FitDegeneracyError(
            f"all {scenario.replications} replications failed: {last_error}") from last_error
    return ScenarioReport(
        scenario=scenario,
        p=_summarize(p_hats, scenario.params.p),
        rho=_summarize(rho_hats, scenario.params.rho),
        degenerate_count=degenerate,
    )


def _summarize(estimates: list[float], truth: float) -> ParameterSummary:
    low, high = percentile_interval(estimates, 0.95)
    return ParameterSummary(
        truth=truth,
        bias=bias(estimates, truth),
        rmse=rmse(estimates, truth),
        interval_low=low,
        interval_high=high,
        estimates=np.array(estimates),
    )
