"""Degree-typed branching matrix for the Poisson bank-asset ensemble.

Types are bank degrees ``1..k_max``. Entry ``(h, k)`` is the expected number
of degree-``h`` banks sunk directly by the fire sale of a degree-``k`` bank:

    N[h, k] = P_b(h) * h (k - 1) / (mu_b^2 n) * sum_l P_a(l) l (l - 1) F(h, k, l)

``F(h, k, l)`` is the probability that the degree-``h`` co-holder of an asset
with ``l`` holders fails when the degree-``k`` holder sells. The other
``l - 2`` holders have size-biased degrees ``m``; only ``S = sum 1/m`` enters,
and failure is equivalent to ``S < s(h, k)`` for an explicit threshold, so
F is an empirical CDF of ``S`` evaluated at ``s(h, k)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..balance import DEFAULT_ALPHA, SOLVENCY_TOL
from .spectral import largest_eigenvalue

DEFAULT_K_MAX = 200
DEFAULT_SAMPLES = 10_000
#: relative cutoff on the asset-degree weights l(l-1)P_a(l)
ELL_CUTOFF = 1e-12


def _poisson_cdf_table(mu: float) -> np.ndarray:
    top = int(mu + 40.0 * math.sqrt(mu) + 40)
    return stats.poisson.cdf(np.arange(top + 1), mu)


def sample_size_biased_degree(mu_b: float, rng=None, size=None):
    """Degree of the bank at the end of a random link: ``P(m) = m P_b(m) / mu_b``.

    For Poisson ``P_b`` this is ``1 + Poisson(mu_b)``; drawn here by inverse
    transform so that equal uniforms give degrees monotone in ``mu_b``.
    """
    if not mu_b > 0:
        raise ValueError("mu_b must be positive")
    rng = np.random.default_rng(rng)
    u = rng.random(size)
    return _size_biased_from_uniform(mu_b, u)


def _size_biased_from_uniform(mu_b: float, u):
    cdf = _poisson_cdf_table(mu_b)
    j = np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)
    return 1 + j


def failure_threshold(h, k, leverage: float, alpha: float):
    """Largest ``S = sum 1/m`` over third-party holders at which a degree-``h``
    bank still fails when a degree-``k`` co-holder sells; ``-inf`` if never.

    Failure means ``(1/h)(1 - exp(-alpha x)) > 1/leverage`` with
    ``x = (1/k) / (1/h + 1/k + S)``.
    """
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    c = h * (1.0 / leverage + SOLVENCY_TOL)
    out = np.full(np.broadcast(h, k).shape, -np.inf)
    ok = np.broadcast_to(c < 1.0, out.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_crit = -np.log1p(-c) / alpha
        s = 1.0 / (k * x_crit) - 1.0 / h - 1.0 / k
    out[ok] = np.broadcast_to(s, out.shape)[ok]
    return out


class FailureKernel:
    """Shared Monte-Carlo samples of ``S_j = sum_{i<=j} 1/m_i`` for
    ``j = 0..ell_max-2``, sorted per ``j``.

    One sample path supplies every asset degree, so ``F`` is exactly
    nonincreasing in ``l`` and the same draws serve all ``(h, k)`` entries.
    With ``regular_degree`` set, every third party has that degree and the
    sums are deterministic.
    """

    def __init__(self, mu_b: float, ell_max: int, leverage: float,
                 alpha: float = DEFAULT_ALPHA, samples: int = DEFAULT_SAMPLES,
                 seed=0, regular_degree: int | None = None):
        if ell_max < 2:
            raise ValueError("ell_max must be >= 2")
        self.mu_b = mu_b
        self.ell_max = int(ell_max)
        self.leverage = leverage
        self.alpha = alpha
        self.samples = int(samples)
        self.regular_degree = regular_degree
        depth = self.ell_max - 2
        if regular_degree is not None:
            self.samples = 1
            sums = np.arange(depth + 1, dtype=float)[:, None] / regular_degree
        else:
            rng = np.random.default_rng(seed)
            # drawn depth-major so a longer table extends a shorter one
            u = rng.random((depth, self.samples))
            inv = 1.0 / _size_biased_from_uniform(mu_b, u)
            sums = np.vstack([np.zeros((1, self.samples)), np.cumsum(inv, axis=0)])
            sums.sort(axis=1)
        self._sorted_sums = sums

    def F(self, h, k, ell: int):
        """Failure probability for co-holder degree ``h``, seller degree ``k``
        and asset degree ``ell`` (scalars or broadcastable arrays in h, k)."""
        if not 2 <= ell <= self.ell_max:
            raise ValueError(f"ell must lie in [2, {self.ell_max}]")
        s = failure_threshold(h, k, self.leverage, self.alpha)
        cnt = np.searchsorted(self._sorted_sums[ell - 2], s, side="left")
        out = cnt / self.samples
        return float(out) if np.ndim(out) == 0 else out


def estimate_F(h: int, k: int, ell: int, leverage: float, alpha: float = DEFAULT_ALPHA,
               mu_b: float = 1.0, samples: int = DEFAULT_SAMPLES, seed=0) -> float:
    if h < 1 or k < 1 or ell < 2:
        raise ValueError("need h, k >= 1 and ell >= 2")
    kernel = FailureKernel(mu_b, ell, leverage, alpha, samples, seed)
    return kernel.F(h, k, ell)


def asset_degree_weights(mu_a: float, cutoff: float = ELL_CUTOFF):
    """``l (l-1) P_a(l)`` for ``l = 2, 3, ...`` until the tail is negligible.

    Uses ``l (l-1) P_a(l) = mu_a^2 P_a(l - 2)``. Returns ``(ells, weights)``.
    """
    if mu_a <= 0:
        return np.array([2]), np.zeros(1)
    top = int(mu_a + 60.0 * math.sqrt(mu_a) + 60)
    w = mu_a**2 * stats.poisson.pmf(np.arange(top + 1), mu_a)
    run = np.cumsum(w)
    j = np.arange(top + 1)
    small = (j > mu_a) & (w < cutoff * run)
    stop = int(np.argmax(small)) if small.any() else top
    return j[: stop + 1] + 2, w[: stop + 1]


@dataclass
class BranchingMatrix:
    entries: np.ndarray
    mu_b: float
    n: float
    leverage: float
    alpha: float
    k_max: int
    samples: int
    spectral_radius: float
    regular_degree: int | None = None

    @property
    def xi1(self) -> float:
        return self.spectral_radius

    def to_rows(self):
        """``(h, k, value)`` triples for the nonzero entries."""
        h, k = np.nonzero(self.entries)
        return [(int(a) + 1, int(b) + 1, float(self.entries[a, b])) for a, b in zip(h, k)]


def branching_matrix(mu_b: float, n: float, leverage: float, alpha: float = DEFAULT_ALPHA,
                     k_max: int = DEFAULT_K_MAX, samples: int = DEFAULT_SAMPLES, seed=0,
                     regular_degree: int | None = None, tol: float = 1e-12) -> BranchingMatrix:
    """Assemble the ``k_max x k_max`` branching matrix and its Perron root.

    With ``regular_degree = k`` the bank degree law is a point mass at ``k``
    (mean ``mu_b`` is then taken to be ``k``) and only entry ``(k, k)`` is set.
    """
    if not mu_b > 0 or not n > 0:
        raise ValueError("mu_b and n must be positive")
    if not leverage > 0 or not alpha > 0:
        raise ValueError("leverage and alpha must be positive")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if regular_degree is not None:
        mu_b = float(regular_degree)
        if regular_degree > k_max:
            raise ValueError("regular_degree exceeds k_max")
    out = np.zeros((k_max, k_max))
    h_top = min(k_max, math.ceil(leverage) - 1)
    ells, weights = asset_degree_weights(mu_b * n)
    if h_top >= 1 and weights.any():
        kernel = FailureKernel(mu_b, int(ells[-1]), leverage, alpha, samples, seed,
                               regular_degree=regular_degree)
        if regular_degree is None:
            hs = np.arange(1, h_top + 1)
            prob_h = stats.poisson.pmf(hs, mu_b)
        else:
            hs = np.array([regular_degree]) if regular_degree <= h_top else np.array([], int)
            prob_h = np.ones(hs.size)
        ks = hs if regular_degree is not None else np.arange(1, k_max + 1)
        if hs.size:
            thresh = failure_threshold(hs[:, None], ks[None, :], leverage, alpha)
            g = np.zeros(thresh.shape)
            for ell, w in zip(ells, weights):
                cnt = np.searchsorted(kernel._sorted_sums[ell - 2], thresh.ravel(), side="left")
                g += w * (cnt.reshape(thresh.shape) / kernel.samples)
            block = (prob_h * hs)[:, None] * (ks - 1)[None, :] / (mu_b**2 * n) * g
            out[np.ix_(hs - 1, ks - 1)] = block
    xi1 = largest_eigenvalue(out, tol=tol)
    return BranchingMatrix(out, mu_b, n, leverage, alpha, k_max,
                           1 if regular_degree is not None else samples, xi1, regular_degree)
