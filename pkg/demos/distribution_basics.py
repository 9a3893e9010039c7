"""
Correlated binomial basics
==========================

The correlated binomial distribution CB(n, p, rho) mixes an ordinary
Binomial(n, p) with a two-point distribution on {0, n}: with probability
rho all n trials agree (all failures with mass 1 - p, all successes with
mass p).  This script walks the distribution itself: probability tables,
what rho does to the shape, and the seeded sampler.
"""

import numpy as np

from corrbinom import CBParams, Dataset, cb_pmf, log_likelihood, pmf_table, sample

###############################################################################
# Probability tables
# ------------------
# At rho = 0 the distribution is plain binomial.  Raising rho drains mass
# from the middle and piles it onto the two extreme counts.

n = 10
print(f"PMF of CB(n={n}, p=0.5, rho) for several mixture weights\n")
header = "y    " + "".join(f"rho={rho:<10}" for rho in (0.0, 0.3, 0.8))
print(header)
tables = {rho: pmf_table(CBParams(n, 0.5, rho)) for rho in (0.0, 0.3, 0.8)}
for y in range(n + 1):
    row = f"{y:<5}" + "".join(f"{tables[rho][y]:<14.6f}" for rho in (0.0, 0.3, 0.8))
    print(row)
for rho, table in tables.items():
    print(f"sum at rho={rho}: {table.sum():.15f}")

###############################################################################
# The boundary component in closed form
# -------------------------------------
# The extra mass beyond the binomial part is rho * (1 - p) at y = 0 and
# rho * p at y = n, which is what makes the mixture integrate to one.

params = CBParams(n, 0.2, 0.9)
print(f"\nCB(n=10, p=0.2, rho=0.9) at the boundary:")
print(f"  P(Y = 0)  = {cb_pmf(0, params):.10f}   (0.9 * 0.8 + 0.1 * 0.8**10)")
print(f"  P(Y = 10) = {cb_pmf(10, params):.10e}")

###############################################################################
# Seeded sampling
# ---------------
# Draws are reproducible given (params, k, seed).  With enough draws the
# empirical frequencies sit on top of the PMF.

params = CBParams(n, 0.5, 0.8)
data = sample(params, 100_000, seed=42)
counts = np.bincount(data.observations, minlength=n + 1)
print("\n100000 seeded draws from CB(10, 0.5, 0.8): empirical vs exact")
print("y    empirical   exact")
for y in range(n + 1):
    print(f"{y:<5}{counts[y] / data.k:<12.5f}{cb_pmf(y, params):.5f}")

again = sample(params, 100_000, seed=42)
print("same seed reproduces the draws bit for bit:",
      np.array_equal(data.observations, again.observations))

###############################################################################
# Scoring data against parameters
# -------------------------------
# The log-likelihood adds log PMF values across observations; impossible
# parameter/data pairs score -inf unless clamping is requested.

small = Dataset(n=6, observations=[0, 2, 3, 6])
for p, rho in [(0.5, 0.2), (0.5, 0.0), (1.0, 0.0)]:
    value = log_likelihood(small, CBParams(6, p, rho))
    print(f"loglik(p={p}, rho={rho}) on {small.observations.tolist()} = {value}")
