"""Perron root of nonnegative matrices by power iteration."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

#: entries below this fraction of the largest are dropped; this moves the
#: spectral radius by at most ``n * NEGLIGIBLE * max(A)``
NEGLIGIBLE = 1e-280


class PowerIterationError(RuntimeError):
    """Power iteration did not reach the requested tolerance."""

    def __init__(self, msg, lower, upper):
        super().__init__(msg)
        self.lower = lower
        self.upper = upper


def _irreducible_radius(a, tol: float, max_iter: int, stall_after: int) -> float:
    n = a.shape[0]
    shift = 0.0
    x = np.full(n, 1.0 / n)
    lower, upper = 0.0, np.inf
    for it in range(1, max_iter + 1):
        y = a @ x + shift * x
        ratio = y / x
        lower, upper = ratio.min(), ratio.max()
        if upper - lower <= tol * upper:
            return float(0.5 * (lower + upper) - shift)
        x = y / y.sum()
        if it == stall_after and shift == 0.0:
            shift = upper
            x = np.full(n, 1.0 / n)
    raise PowerIterationError(
        f"no convergence in {max_iter} iterations: rho in [{lower - shift}, {upper - shift}]",
        lower - shift, upper - shift)


def largest_eigenvalue(matrix, tol: float = 1e-12, max_iter: int = 100_000,
                       stall_after: int = 500) -> float:
    """Spectral radius of a square nonnegative matrix (dense or scipy.sparse).

    The matrix is split into strongly connected components; the radius is the
    largest over the irreducible diagonal blocks. On each block the iteration
    starts from the uniform vector and stops once the Collatz-Wielandt bounds
    ``min (Ax)_i/x_i <= rho <= max (Ax)_i/x_i`` agree to relative ``tol``.
    If they have not met after ``stall_after`` iterations (a periodic block)
    it restarts on ``A + eps*I`` with ``eps`` the current upper bound, and
    subtracts ``eps`` at the end. Raises :class:`PowerIterationError` after
    ``max_iter`` iterations on any block.
    """
    a = sp.csr_matrix(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.nnz and a.data.min() < 0:
        raise ValueError("matrix must be nonnegative")
    if a.nnz == 0:
        return 0.0
    a.data[a.data < NEGLIGIBLE * a.data.max()] = 0.0
    a.eliminate_zeros()
    n_comp, labels = connected_components(a, directed=True, connection="strong")
    best = 0.0
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        block = a[idx][:, idx]
        if block.nnz == 0:
            continue
        if idx.size == 1:
            best = max(best, float(block[0, 0]))
            continue
        block = block.toarray() if idx.size <= 500 else block
        best = max(best, _irreducible_radius(block, tol, max_iter, stall_after))
    return best
