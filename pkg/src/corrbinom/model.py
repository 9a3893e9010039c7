"""The correlated binomial distribution CB(n, p, rho).

CB(n, p, rho) is a two-component mixture over {0, 1, ..., n}: with weight
``1 - rho`` a count is an ordinary Binomial(n, p) draw, and with weight
``rho`` it comes from a two-point distribution that puts mass ``1 - p`` at
0 and mass ``p`` at n.  The mixture weight ``rho`` is the conventional
proxy for positive correlation among the n underlying trials: at ``rho = 0``
the model is plain binomial, at ``rho = 1`` every trial in a draw agrees.

This module holds the parameter and data containers, the PMF, the
observed-data log-likelihood, and a seeded sampler.  Everything here is a
pure function of its inputs (the sampler is pure given its seed), so values
can be shared freely across threads or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CBParams",
    "Dataset",
    "binomial_pmf",
    "cb_pmf",
    "log_binomial_coeff",
    "log_likelihood",
    "pmf_table",
    "sample",
]

# Per-observation probability floor applied by log_likelihood(clamp=True).
PROB_FLOOR = 1e-300


@dataclass(frozen=True)
class CBParams:
    """Parameter triple of the correlated binomial distribution.

    Attributes
    ----------
    n : int
        Number of trials per count, at least 1.
    p : float
        Success probability, in [0, 1].
    rho : float
        Mixture weight of the two-point component, in [0, 1].
    """

    n: int
    p: float
    rho: float

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")


@dataclass(frozen=True)
class Dataset:
    """Observed counts y_1..y_k sharing a single trial count n.

    The observations are normalized to a read-only int64 array; each y_i
    must satisfy 0 <= y_i <= n and there must be at least one observation.
    """

    n: int
    observations: np.ndarray

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        obs = np.asarray(self.observations)
        if obs.ndim != 1 or obs.size == 0:
            raise ValueError("observations must be a non-empty 1-d sequence")
        if not np.issubdtype(obs.dtype, np.integer):
            as_int = obs.astype(np.int64)
            if not np.array_equal(as_int, obs):
                raise ValueError("observations must be integers")
            obs = as_int
        else:
            obs = obs.astype(np.int64)
        if obs.min() < 0 or obs.max() > self.n:
            bad = obs[(obs < 0) | (obs > self.n)][0]
            raise ValueError(f"observation {bad} outside [0, {self.n}]")
        obs.flags.writeable = False
        object.__setattr__(self, "observations", obs)

    @property
    def k(self) -> int:
        """Number of observations."""
        return int(self.observations.size)


def log_binomial_coeff(n: int, y: int) -> float:
    """log C(n, y) via the log-gamma function; exact enough for n >> 1000."""
    return math.lgamma(n + 1) - math.lgamma(y + 1) - math.lgamma(n - y + 1)


def _check_count(y: int, n: int) -> None:
    if not (isinstance(y, (int, np.integer)) and 0 <= y <= n):
        raise ValueError(f"count y={y!r} outside [0, {n}]")


def binomial_pmf(y: int, n: int, p: float) -> float:
    """Binomial(n, p) probability of exactly y successes.

    Computed in log space so that coefficients stay finite for large n.
    The degenerate parameter values p = 0 and p = 1 follow the 0**0 = 1
    convention, giving a unit point mass at 0 or n.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    _check_count(y, n)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0:
        return 1.0 if y == 0 else 0.0
    if p == 1.0:
        return 1.0 if y == n else 0.0
    return math.exp(log_binomial_coeff(n, y) + y * math.log(p) + (n - y) * math.log1p(-p))


def cb_pmf(y: int, params: CBParams) -> float:
    """Correlated binomial probability of the count y.

    Equals ``(1 - rho) * Binomial(n, p) + rho * two_point(y)`` where the
    two-point component has mass ``1 - p`` at 0 and ``p`` at n (those are
    the y = 0 and y = n values of ``p**(y/n) * (1-p)**((n-y)/n)``).
    """
    _check_count(y, params.n)
    prob = (1.0 - params.rho) * binomial_pmf(y, params.n, params.p)
    if y == 0:
        prob += params.rho * (1.0 - params.p)
    elif y == params.n:
        prob += params.rho * params.p
    return prob


def pmf_table(params: CBParams) -> np.ndarray:
    """All CB probabilities for y = 0..n, in order."""
    return np.array([cb_pmf(y, params) for y in range(params.n + 1)])


def log_likelihood(data: Dataset, params: CBParams, clamp: bool = False) -> float:
    """Observed-data log-likelihood of the CB parameters.

    Parameters
    ----------
    data : Dataset
        Counts to score; ``data.n`` must match ``params.n``.
    params : CBParams
        Parameter triple to evaluate.
    clamp : bool
        When False (default) a zero-probability observation makes the
        result -inf, honestly.  When True, per-observation probabilities
        are floored at ``PROB_FLOOR`` so the result stays finite.

    Returns
    -------
    float
        Sum of log CB probabilities over the observations.
    """
    if data.n != params.n:
        raise ValueError(f"dataset n={data.n} does not match params n={params.n}")
    total = 0.0
    for y in data.observations.tolist():
        prob = cb_pmf(y, params)
        if clamp and prob < PROB_FLOOR:
            prob = PROB_FLOOR
        if prob <= 0.0:
            return float("-inf")
        total += math.log(prob)
    return total


def sample(params: CBParams, k: int, seed: int) -> Dataset:
    """Draw k independent CB counts, reproducibly.

    Each draw is the inverse-CDF transform of one uniform variate from a
    PCG64 generator seeded with ``seed``, applied to the exact CB
    probability table.  The generator and the transform are both fixed, so
    a given (params, k, seed) always produces the identical dataset.
    """
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(pmf_table(params))
    draws = np.searchsorted(cdf, rng.random(k), side="right")
    # cumsum can round the final CDF value a hair below 1.0
    np.minimum(draws, params.n, out=draws)
    return Dataset(n=params.n, observations=draws)
