"""EM estimation of the correlated binomial parameters.

The estimator treats the component membership of each observation as a
latent indicator.  The E-step computes the posterior probability (the
responsibility) that an observation came from the two-point component;
only counts sitting on the boundary set {0, n} can carry a nonzero
responsibility.  The M-step has closed forms: the new mixture weight is
the mean responsibility, and the new success probability is a
responsibility-weighted success fraction.

The loop semantics are pinned so fits are exactly reproducible: one
unconditional update before the loop, an iteration counter that starts at
1 and increments once per loop pass, and a stop as soon as either
parameter moves less than ``epsilon`` between consecutive passes (or the
iteration cap is reached).  Note the "either" in that rule: on data where
one parameter stalls early the loop can stop while the other is still
drifting at a scale far above ``epsilon``.  The mixture weight update has
an absorbing boundary at zero (once ``rho`` is exactly 0 every later
update keeps it 0), which is why start values must be strictly interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import CBParams, Dataset, cb_pmf, log_binomial_coeff, log_likelihood

__all__ = [
    "EMConfig",
    "EMResult",
    "FitDegeneracyError",
    "e_step",
    "em_fit",
    "m_step",
    "q_function",
]


class FitDegeneracyError(RuntimeError):
    """A fit reached a state assigning zero probability to an observation.

    Attributes
    ----------
    observation_index : int or None
        Position of the offending observation in the dataset.
    iteration : int or None
        EM iteration at which the degeneracy was detected.
    """

    def __init__(self, message: str, *, observation_index: int | None = None,
                 iteration: int | None = None):
        super().__init__(message)
        self.observation_index = observation_index
        self.iteration = iteration


@dataclass(frozen=True)
class EMConfig:
    """Controls for the EM loop.

    Start values must be strictly inside (0, 1): ``start_rho = 0`` is an
    absorbing fixed point that would silently return the plain binomial
    MLE, so it is rejected instead of tolerated.
    """

    start_p: float = 0.5
    start_rho: float = 0.5
    max_iterations: int = 1000
    epsilon: float = 1e-15

    def __post_init__(self):
        if not 0.0 < self.start_p < 1.0:
            raise ValueError(f"start_p must lie strictly inside (0, 1), got {self.start_p!r}")
        if not 0.0 < self.start_rho < 1.0:
            raise ValueError(f"start_rho must lie strictly inside (0, 1), got {self.start_rho!r}")
        if not (isinstance(self.max_iterations, (int, np.integer)) and self.max_iterations >= 1):
            raise ValueError(f"max_iterations must be an integer >= 1, got {self.max_iterations!r}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")


@dataclass
class EMResult:
    """Outcome of one EM fit.

    ``responsibilities`` are the E-step values that produced the final
    parameter update, so ``rho_hat`` equals their mean exactly.
    ``trajectory`` records ``(p, rho, log_likelihood)`` per update,
    starting with the start values.
    """

    p_hat: float
    rho_hat: float
    iterations: int
    converged_p: bool
    converged_rho: bool
    log_likelihood: float
    responsibilities: np.ndarray
    trajectory: list[tuple[float, float, float]] = field(repr=False, default_factory=list)

    @property
    def converged(self) -> bool:
        """True when the loop stopped on the movement test, not the cap."""
        return self.converged_p or self.converged_rho


def e_step(data: Dataset, params: CBParams) -> np.ndarray:
    """Posterior two-point-component responsibilities, one per observation.

    For y on the boundary set {0, n} the responsibility is
    ``rho * two_point(y) / cb_pmf(y)``; elsewhere it is exactly 0.

    Raises
    ------
    FitDegeneracyError
        If the model assigns zero probability to any observation.
    """
    if data.n != params.n:
        raise ValueError(f"dataset n={data.n} does not match params n={params.n}")
    n, p, rho = params.n, params.p, params.rho
    # For 0 < y < n the PMF is (1 - rho) * Binomial(y), which vanishes only
    # when rho = 1 or p is 0 or 1, so no per-observation PMF call is needed.
    interior_zero = rho == 1.0 or p == 0.0 or p == 1.0
    prob_at_0 = prob_at_n = None
    tau = np.zeros(data.k)
    for i, y in enumerate(data.observations.tolist()):
        if y == 0:
            if prob_at_0 is None:
                prob_at_0 = cb_pmf(0, params)
            if prob_at_0 <= 0.0:
                raise FitDegeneracyError(
                    f"zero probability for observation {i} (y=0)", observation_index=i)
            tau[i] = rho * (1.0 - p) / prob_at_0
        elif y == n:
            if prob_at_n is None:
                prob_at_n = cb_pmf(n, params)
            if prob_at_n <= 0.0:
                raise FitDegeneracyError(
                    f"zero probability for observation {i} (y={n})", observation_index=i)
            tau[i] = rho * p / prob_at_n
        elif interior_zero:
            raise FitDegeneracyError(
                f"zero probability for observation {i} (y={y})", observation_index=i)
    return tau


def m_step(data: Dataset, responsibilities: np.ndarray) -> tuple[float, float]:
    """Closed-form parameter update for fixed responsibilities.

    Returns the pair ``(p, rho)`` maximizing the expected complete-data
    log-likelihood: ``rho`` is the mean responsibility and ``p`` is the
    ratio of responsibility-weighted success counts to responsibility-
    weighted trial counts (a boundary observation contributes y/n
    successes out of 1 effective trial, a binomial one y out of n).
    """
    tau = np.asarray(responsibilities, dtype=float)
    if tau.shape != (data.k,):
        raise ValueError(f"expected {data.k} responsibilities, got shape {tau.shape}")
    if tau.size and (tau.min() < 0.0 or tau.max() > 1.0):
        raise ValueError("responsibilities must lie in [0, 1]")
    n = data.n
    successes = trials = total = 0.0
    for y, t in zip(data.observations.tolist(), tau.tolist()):
        total += t
        successes += t * y / n + (1.0 - t) * y
        trials += t + (1.0 - t) * n
    return successes / trials, total / data.k


def q_function(data: Dataset, responsibilities: np.ndarray, params: CBParams) -> float:
    """Expected complete-data log-likelihood under fixed responsibilities.

    This is the objective the M-step maximizes.  Products of the form
    0 * log(0) are taken as 0, so boundary parameter values score the
    terms they make irrelevant as zero rather than NaN.
    """
    if data.n != params.n:
        raise ValueError(f"dataset n={data.n} does not match params n={params.n}")
    tau = np.asarray(responsibilities, dtype=float)
    if tau.shape != (data.k,):
        raise ValueError(f"expected {data.k} responsibilities, got shape {tau.shape}")
    n, p, rho = params.n, params.p, params.rho
    total = 0.0
    for y, t in zip(data.observations.tolist(), tau.tolist()):
        total += _xlogy(t, rho) + _xlogy(1.0 - t, 1.0 - rho)
        total += _xlogy(t * y / n + (1.0 - t) * y, p)
        total += _xlogy(t * (n - y) / n + (1.0 - t) * (n - y), 1.0 - p)
        total += (1.0 - t) * log_binomial_coeff(n, y)
    return total


def _xlogy(coeff: float, value: float) -> float:
    if coeff == 0.0:
        return 0.0
    return coeff * math.log(value) if value > 0.0 else float("-inf")


def em_fit(data: Dataset, config: EMConfig | None = None) -> EMResult:
    """Fit CB(n, p, rho) to the data by EM.

    Alternates :func:`e_step` and :func:`m_step` from the configured start
    values: one update before the loop, then passes that stop once either
    parameter moves less than ``config.epsilon`` or ``config.max_iterations``
    is reached.  The reported iteration count starts at 1 and increments
    once per loop pass.

    Raises
    ------
    FitDegeneracyError
        If any iterate assigns zero probability to an observation or the
        log-likelihood becomes non-finite; the error carries the iteration.
    """
    if config is None:
        config = EMConfig()
    eps = config.epsilon
    p, rho = config.start_p, config.start_rho

    trajectory = [(p, rho, log_likelihood(data, CBParams(data.n, p, rho)))]

    def update(p, rho, iteration):
        try:
            tau = e_step(data, CBParams(data.n, p, rho))
        except FitDegeneracyError as exc:
            raise FitDegeneracyError(
                f"iteration {iteration}: {exc}",
                observation_index=exc.observation_index, iteration=iteration) from exc
        p_new, rho_new = m_step(data, tau)
        ll = log_likelihood(data, CBParams(data.n, p_new, rho_new))
        if not math.isfinite(ll):
            raise FitDegeneracyError(
                f"iteration {iteration}: non-finite log-likelihood", iteration=iteration)
        trajectory.append((p_new, rho_new, ll))
        return tau, p_new, rho_new, ll

    tau, p, rho, ll = update(p, rho, 1)
    iterations = 1
    converged_p = converged_rho = False
    while iterations < config.max_iterations and not converged_p and not converged_rho:
        tau, p_new, rho_new, ll = update(p, rho, iterations + 1)
        converged_p = abs(p_new - p) < eps
        converged_rho = abs(rho_new - rho) < eps
        iterations += 1
        p, rho = p_new, rho_new

    return EMResult(
        p_hat=p,
        rho_hat=rho,
        iterations=iterations,
        converged_p=converged_p,
        converged_rho=converged_rho,
        log_likelihood=ll,
        responsibilities=tau,
        trajectory=trajectory,
    )
