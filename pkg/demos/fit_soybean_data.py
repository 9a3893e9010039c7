"""
Fitting real data by EM
=======================

Twenty plots of six soybean plants each were scored for how many plants
per plot were selected after 15 days.  Plants in a plot compete for
nutrients, so the six outcomes within a plot are correlated and a plain
binomial fit is suspect.  This script fits CB(6, p, rho) to the counts by
EM, cross-checks the maximum against a brute-force grid search, and
compares the likelihood against a published Bayesian posterior-mean point
for the same data.
"""

from corrbinom import CBParams, Dataset, EMConfig, em_fit, grid_mle, log_likelihood

counts = [4, 4, 6, 2, 3, 3, 3, 5, 5, 6, 6, 3, 3, 4, 1, 1, 5, 4, 4, 2]
data = Dataset(n=6, observations=counts)

###############################################################################
# The EM fit
# ----------
# Start values are interior; the loop runs to machine-level parameter
# movement (eps = 1e-15).

result = em_fit(data, EMConfig(start_p=0.5, start_rho=0.1))
print("EM fit of CB(6, p, rho) to the soybean counts")
print(f"  p_hat          = {result.p_hat:.7f}")
print(f"  rho_hat        = {result.rho_hat:.7f}")
print(f"  iterations     = {result.iterations}")
print(f"  converged      = {result.converged}")
print(f"  log-likelihood = {result.log_likelihood:.5f}")

###############################################################################
# Start-value robustness
# ----------------------
# The fitted maximum does not depend on where the iteration starts.

for start in [(0.5, 0.5), (0.9, 0.9), (0.1, 0.1)]:
    fit = em_fit(data, EMConfig(start_p=start[0], start_rho=start[1]))
    print(f"  start {start}: ({fit.p_hat:.7f}, {fit.rho_hat:.7f}) "
          f"in {fit.iterations} iterations")

###############################################################################
# Independent cross-check
# -----------------------
# A grid search over the whole unit square, refined three times, lands on
# the same point, supporting the claim that EM found the global maximum.

grid = grid_mle(data)
print("\nGrid-search cross-check")
print(f"  p              = {grid.p:.7f}")
print(f"  rho            = {grid.rho:.7f}")
print(f"  log-likelihood = {grid.log_likelihood:.5f}")
print(f"  gap to EM      = {result.log_likelihood - grid.log_likelihood:.2e}")

###############################################################################
# Likelihood comparison with a Bayesian point estimate
# ----------------------------------------------------
# Posterior means under uniform priors for this data are p = 0.5826,
# rho = 0.1296.  The EM maximum scores a strictly higher likelihood.

bayes_ll = log_likelihood(data, CBParams(6, 0.5826, 0.1296))
print("\nLikelihood comparison")
print(f"  posterior means (0.5826, 0.1296): loglik = {bayes_ll:.5f}")
print(f"  EM estimate:                      loglik = {result.log_likelihood:.5f}")
print(f"  EM is higher by {result.log_likelihood - bayes_ll:.5f}")
