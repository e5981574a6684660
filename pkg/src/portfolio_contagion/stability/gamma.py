"""Regularized incomplete gamma functions and the regular-network eigenvalue."""
from __future__ import annotations

import math

_EPS = 1e-15
_FPMIN = 1e-300
_MAX_ITER = 10_000


def _lower_series(s: float, x: float) -> float:
    # P(s, x) = x^s e^-x / Gamma(s+1) * sum_n x^n / ((s+1)...(s+n))
    term = total = 1.0 / s
    ap = s
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ArithmeticError(f"series for P({s}, {x}) did not converge")


def _upper_continued_fraction(s: float, x: float) -> float:
    # Q(s, x) via the Legendre continued fraction, modified Lentz evaluation
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h
    raise ArithmeticError(f"continued fraction for Q({s}, {x}) did not converge")


def gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s), s > 0."""
    if s <= 0:
        raise ValueError("gamma_q needs s > 0")
    if x < 0:
        raise ValueError("gamma_q needs x >= 0")
    if x == 0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - _lower_series(s, x)
    return _upper_continued_fraction(s, x)


def gamma_p(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) = 1 - Q(s, x)."""
    if s <= 0:
        raise ValueError("gamma_p needs s > 0")
    if x < 0:
        raise ValueError("gamma_p needs x >= 0")
    if x == 0:
        return 0.0
    if x < s + 1.0:
        return _lower_series(s, x)
    return 1.0 - _upper_continued_fraction(s, x)


def critical_asset_degree(k: float, leverage: float, alpha: float | None = None) -> float:
    """``1/log(lambda/(lambda-k))``, optionally scaled by ``alpha``.

    With all banks of degree ``k`` a single failure on an asset held by
    ``l`` banks sells ``1/l`` of it, and a co-holder fails iff
    ``l < alpha / log(lambda/(lambda-k))``. The unscaled form is the one used
    by :func:`closed_form_xi1` by default.
    """
    if not 0 < k < leverage:
        raise ValueError("need 0 < k < leverage")
    ell = 1.0 / math.log(leverage / (leverage - k))
    return ell if alpha is None else alpha * ell


def closed_form_xi1(k: int, mu_b: float, n: float, leverage: float,
                    alpha: float | None = None) -> float:
    """Largest eigenvalue for a network where every bank has degree ``k``:
    ``(k-1) mu_b n Q(l* - 1, mu_b n)``.

    Returns 0 when ``k >= leverage`` (one asset can never sink such a bank)
    and when ``l* <= 1``, where the gamma ratio is undefined and no asset of
    degree >= 2 is below the threshold. Passing ``alpha`` uses ``alpha * l*``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1 or k >= leverage:
        return 0.0
    ell = critical_asset_degree(k, leverage, alpha)
    if ell <= 1.0:
        return 0.0
    mu_a = mu_b * n
    return (k - 1) * mu_a * gamma_q(ell - 1.0, mu_a)
