"""
Banks with identical diversification
====================================

When every bank holds exactly k assets the branching matrix has a single
live entry and its eigenvalue has a closed form in the upper incomplete
gamma function. The continuous form interpolates between integer asset
degrees, so it sits above the Monte-Carlo value, which only counts whole
numbers of co-holders.
"""
import math

from scipy.stats import poisson

from portfolio_contagion.balance import DEFAULT_ALPHA
from portfolio_contagion.stability import branching_matrix, closed_form_xi1, critical_asset_degree

k, lam, n = 5, 20.0, 1.0
mc = branching_matrix(float(k), n, lam, regular_degree=k).xi1
print(f"Monte-Carlo xi1        {mc:.5f}")
print(f"closed form            {closed_form_xi1(k, k, n, lam):.5f}")
print(f"closed form, alpha l*  {closed_form_xi1(k, k, n, lam, alpha=DEFAULT_ALPHA):.5f}")

# counting whole asset degrees reproduces the Monte-Carlo value
ell = math.floor(critical_asset_degree(k, lam, DEFAULT_ALPHA))
print(f"integer cutoff l<={ell}     {(k - 1) * k * n * poisson.cdf(ell - 2, k * n):.5f}")

# xi1 from the closed form falls off quickly as banks diversify
for k in range(2, 20, 3):
    print(k, round(closed_form_xi1(k, k, n, lam), 4))
