"""
Phase boundaries and the critical leverage
==========================================

Bisect on xi1 = 1 to find the edges of the unstable region, and scan the
least leverage at which any diversification level becomes unstable.
"""
from portfolio_contagion.stability import MCParams, critical_leverage, phase_boundary

mc = MCParams(k_max=100, samples=5000)

print(" lambda   mu_1    mu_2")
for lam in (14, 20, 30):
    fixed = {"n": 1.0, "leverage": lam}
    lo = phase_boundary(fixed, "mu_b", 0.3, 2.5, tol=1e-2, mc=mc)
    hi = phase_boundary(fixed, "mu_b", 2.5, 25.0, tol=1e-2, mc=mc)
    print(f"{lam:6}   {lo:5.2f}  {hi:6.2f}")

# more banks per asset shifts the window to lower diversification
for n in (0.5, 1.0, 2.0):
    lo = phase_boundary({"n": n, "leverage": 20.0}, "mu_b", 0.2, 2.5, tol=1e-2, mc=mc)
    print(f"n={n}: lower edge at mu_b={lo:.2f}")

best = min((critical_leverage(mu, n, tol=1e-2, mc=mc), mu, n)
           for mu in (1, 2, 3, 4, 6) for n in (0.5, 1.0, 2.0))
print("least unstable leverage %.2f at mu_b=%s, n=%s" % best)
