import math

import numpy as np
import pytest
from scipy import special

from portfolio_contagion.stability import closed_form_xi1, critical_asset_degree, gamma_p, gamma_q
from portfolio_contagion.stability.kernel import DEFAULT_ALPHA


@pytest.mark.parametrize("s", [0.05, 0.5, 1.0, 2.4761, 7.3, 30.0, 150.0])
@pytest.mark.parametrize("x", [1e-6, 0.3, 1.0, 5.0, 12.0, 80.0, 200.0])
def test_gamma_q_against_scipy(s, x):
    ref = special.gammaincc(s, x)
    if ref < 1e-280:
        return
    assert gamma_q(s, x) == pytest.approx(ref, rel=1e-10, abs=1e-300)
    assert gamma_p(s, x) == pytest.approx(special.gammainc(s, x), rel=1e-10, abs=1e-300)


def test_gamma_q_integer_order_is_poisson_cdf():
    # Q(s, x) = P(Poisson(x) <= s - 1) for integer s
    x = 5.0
    for s in range(1, 8):
        cdf = sum(math.exp(-x) * x**j / math.factorial(j) for j in range(s))
        assert gamma_q(s, x) == pytest.approx(cdf, rel=1e-12)


def test_gamma_q_domain():
    with pytest.raises(ValueError):
        gamma_q(0.0, 1.0)
    assert gamma_q(2.0, 0.0) == 1.0


def test_closed_form_trivial_cases():
    assert closed_form_xi1(1, 5, 1, 20) == 0.0
    assert closed_form_xi1(20, 5, 1, 20) == 0.0
    assert closed_form_xi1(25, 5, 1, 20) == 0.0


def test_closed_form_against_scipy():
    ell = 1 / math.log(4 / 3)
    assert critical_asset_degree(5, 20) == pytest.approx(3.4761, abs=1e-4)
    expected = 4 * 5 * 1 * special.gammaincc(ell - 1, 5.0)
    assert closed_form_xi1(5, 5.0, 1.0, 20.0) == pytest.approx(expected, rel=1e-10)


def test_closed_form_alpha_variant():
    ell = DEFAULT_ALPHA / math.log(4 / 3)
    expected = 4 * 5 * special.gammaincc(ell - 1, 5.0)
    assert closed_form_xi1(5, 5.0, 1.0, 20.0, alpha=DEFAULT_ALPHA) == pytest.approx(expected, rel=1e-10)


def test_closed_form_grows_with_leverage():
    vals = [closed_form_xi1(5, 5.0, 1.0, lev) for lev in np.linspace(6, 60, 20)]
    assert np.all(np.diff(vals) > 0)
