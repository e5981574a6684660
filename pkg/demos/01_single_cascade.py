"""
One fire-sale cascade, step by step
===================================

Build a random bank-asset network, give every bank the same balance sheet,
knock 35% off one asset and watch the failures propagate.
"""
import numpy as np

from portfolio_contagion import (Shock, build_uniform_system, degree_stats,
                                 gen_poisson_bipartite, run_cascade)

# 2000 banks and 2000 assets, each bank holding on average 3 assets
net = gen_poisson_bipartite(2000, 2000, mean_bank_degree=3.0, seed=11)
stats = degree_stats(net)
print(f"{net.n_links} links, mean bank degree {stats.mean_bank_degree:.2f}, "
      f"mean asset degree {stats.mean_asset_degree:.2f}")

# leverage 20: equity is 5% of the risky portfolio
system = build_uniform_system(net, leverage=20.0)
print("equity of bank 0:", system.initial_equity[0])

# devalue the most widely held asset
target = int(np.argmax(net.asset_degrees))
result = run_cascade(system, Shock.asset(target, 0.35))

for t, failed in enumerate(result.failures_by_step):
    print(f"step {t:2d}: {len(failed):4d} new failures")
print(f"{result.n_failed} banks failed ({result.failed_fraction:.1%}); "
      f"global cascade: {result.is_global}")

# the asset prices after the dust settles
prices = result.final_prices
print(f"assets below half their initial price: {(prices < 0.5).sum()}")
