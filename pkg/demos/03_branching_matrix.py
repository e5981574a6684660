"""
Stability from the branching matrix
===================================

Entry (h, k) of the branching matrix is the expected number of degree-h
banks that fail as a direct result of a degree-k failure. Its largest
eigenvalue xi1 decides whether a single failure can grow: above 1 the
process is supercritical.
"""
import numpy as np

from portfolio_contagion import (build_uniform_system, gen_poisson_bipartite,
                                 stability_matrix_exact)
from portfolio_contagion.stability import branching_matrix

for mu_b in (0.5, 1, 1.5, 2, 3, 5, 7, 9):
    m = branching_matrix(mu_b, n=1.0, leverage=20.0, k_max=100, samples=5000)
    flag = "unstable" if m.xi1 > 1 else "stable"
    print(f"mu_b={mu_b:4}: xi1={m.xi1:6.3f}  {flag}")

# degrees 1..5 of the matrix at mu_b = 2 (row/column i is degree i + 1);
# a degree-1 bank has no second asset to pass losses through, so column 1 is zero
m = branching_matrix(2.0, n=1.0, leverage=20.0, k_max=100)
with np.printoptions(precision=3, suppress=True):
    print(m.entries[:5, :5])

# for a concrete network the 0/1 matrix B says which single failure
# directly topples which bank; its spectral radius plays the same role
net = gen_poisson_bipartite(3000, 3000, 2.0, seed=5)
b = stability_matrix_exact(build_uniform_system(net, 20.0))
print(f"concrete system: {b.entries.nnz} direct contagion links, "
      f"spectral radius {b.spectral_radius:.3f}")
