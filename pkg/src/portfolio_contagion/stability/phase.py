"""Locating the surface xi1 = 1 in (mu_b, n, leverage) space."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..balance import DEFAULT_ALPHA
from .kernel import DEFAULT_K_MAX, DEFAULT_SAMPLES, branching_matrix

AXES = ("mu_b", "n", "leverage")


class NoBracketError(ValueError):
    """xi1 - 1 has the same sign at both ends of the search interval."""


@dataclass(frozen=True)
class MCParams:
    alpha: float = DEFAULT_ALPHA
    k_max: int = DEFAULT_K_MAX
    samples: int = DEFAULT_SAMPLES
    seed: int = 0


def canonical_axis(name: str) -> str:
    name = {"lambda": "leverage", "lam": "leverage", "mean_bank_degree": "mu_b",
            "crowding": "n"}.get(name, name)
    if name not in AXES:
        raise ValueError(f"unknown axis {name!r}; expected one of {AXES}")
    return name


def xi1_at(mu_b: float, n: float, leverage: float, mc: MCParams = MCParams()) -> float:
    return branching_matrix(mu_b, n, leverage, mc.alpha, mc.k_max, mc.samples, mc.seed).xi1


def phase_boundary(fixed: dict, axis: str, lo: float, hi: float, tol: float = 1e-3,
                   mc: MCParams = MCParams()) -> float:
    """Bisect on ``xi1(axis) = 1`` with the other two parameters in ``fixed``.

    Every evaluation reuses ``mc.seed``, so xi1 is a deterministic function of
    the axis value.
    """
    axis = canonical_axis(axis)
    fixed = {canonical_axis(k): v for k, v in fixed.items()}
    if set(fixed) | {axis} != set(AXES) or axis in fixed:
        raise ValueError("fix exactly the two parameters not on the axis")

    def g(v):
        return xi1_at(**{**fixed, axis: v}, mc=mc) - 1.0

    g_lo, g_hi = g(lo), g(hi)
    if (g_lo > 0) == (g_hi > 0):
        raise NoBracketError(f"xi1 - 1 does not change sign on [{lo}, {hi}] "
                             f"({g_lo + 1:.4g}, {g_hi + 1:.4g})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (g(mid) > 0) == (g_lo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_leverage(mu_b: float, n: float, lo: float = 1.0, hi: float = 60.0,
                      tol: float = 1e-3, mc: MCParams = MCParams()) -> float:
    """Smallest leverage at which xi1 exceeds 1; ``inf`` if not reached by ``hi``.

    Relies on xi1 being nondecreasing in leverage.
    """
    if xi1_at(mu_b, n, hi, mc) <= 1.0:
        return math.inf
    if xi1_at(mu_b, n, lo, mc) > 1.0:
        return lo
    return phase_boundary({"mu_b": mu_b, "n": n}, "leverage", lo, hi, tol, mc)


def xi1_grid(axes: dict, fixed: dict | None = None, mc: MCParams = MCParams()):
    """Evaluate xi1 on the Cartesian product of ``axes``.

    Returns ``(names, values, xi)`` where ``values`` lists the axis arrays and
    ``xi`` has one dimension per axis.
    """
    axes = {canonical_axis(k): np.asarray(v, dtype=float) for k, v in axes.items()}
    fixed = {canonical_axis(k): v for k, v in (fixed or {}).items()}
    missing = set(AXES) - set(axes) - set(fixed)
    if missing:
        raise ValueError(f"no value for {sorted(missing)}")
    names = list(axes)
    values = [axes[k] for k in names]
    xi = np.zeros([v.size for v in values])
    for idx in itertools.product(*(range(v.size) for v in values)):
        point = {**fixed, **{k: values[d][i] for d, (k, i) in enumerate(zip(names, idx))}}
        xi[idx] = xi1_at(point["mu_b"], point["n"], point["leverage"], mc)
    return names, values, xi


def boundary_flags(xi: np.ndarray) -> np.ndarray:
    """Grid cells whose stability (xi1 > 1) differs from some axis neighbour."""
    unstable = xi > 1.0
    flags = np.zeros_like(unstable)
    for d in range(xi.ndim):
        diff = np.diff(unstable, axis=d)
        lo = [slice(None)] * xi.ndim
        hi = [slice(None)] * xi.ndim
        lo[d] = slice(None, -1)
        hi[d] = slice(1, None)
        flags[tuple(lo)] |= diff
        flags[tuple(hi)] |= diff
    return flags
