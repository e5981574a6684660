"""Pairwise stability matrix of a concrete system."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..balance import SOLVENCY_TOL, FinancialSystem
from .spectral import largest_eigenvalue


@dataclass
class StabilityMatrixExact:
    """``entries[i, j] = 1`` iff bank ``j``'s fire sale alone sinks bank ``i``."""

    entries: sp.csr_matrix
    spectral_radius: float

    def toarray(self) -> np.ndarray:
        return self.entries.toarray()


def direct_losses(sys: FinancialSystem) -> sp.csr_matrix:
    """Loss of bank ``i`` when bank ``j`` alone liquidates, at initial prices.

    ``L[i, j] = sum_a Q_ia p_a (1 - f(Q_ja / T_a))`` with ``T_a`` the total
    shares of asset ``a``. Computed as ``Q P @ D`` with ``D[a, j]`` the
    relative price drop of ``a`` caused by ``j``.
    """
    net = sys.network
    shape = (net.n_banks, net.n_assets)
    q = sp.csr_matrix((sys.holdings, (net.link_bank, net.link_asset)), shape=shape)
    p0 = sys.initial_prices
    x = sys.holdings / sys.market.total_shares[net.link_asset]
    drop = 1.0 - sys.impact(x)
    d = sp.csr_matrix((drop, (net.link_asset, net.link_bank)), shape=shape[::-1])
    return (q @ sp.diags(p0) @ d).tocsr()


def stability_matrix_exact(sys: FinancialSystem) -> StabilityMatrixExact:
    loss = direct_losses(sys).tocoo()
    equity = sys.initial_equity
    hit = (loss.row != loss.col) & (loss.data > equity[loss.row] + SOLVENCY_TOL)
    n = sys.n_banks
    b = sp.csr_matrix((np.ones(int(hit.sum())), (loss.row[hit], loss.col[hit])), shape=(n, n))
    return StabilityMatrixExact(b, largest_eigenvalue(b))
