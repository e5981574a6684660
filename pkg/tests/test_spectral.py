import numpy as np
import pytest
import scipy.sparse as sp

from oracles import perron_root_by_charpoly
from portfolio_contagion.stability import PowerIterationError, largest_eigenvalue


def test_identity():
    assert largest_eigenvalue(np.eye(3)) == pytest.approx(1.0, rel=1e-12)


def test_diagonal():
    assert largest_eigenvalue(np.diag([2.0, 1.0])) == pytest.approx(2.0, rel=1e-12)


def test_zero_matrix():
    assert largest_eigenvalue(np.zeros((4, 4))) == 0.0


def test_nilpotent_is_zero():
    assert largest_eigenvalue(np.triu(np.ones((4, 4)), 1)) == 0.0


def test_periodic_matrix_converges_via_shift():
    # cyclic permutation: all eigenvalues on the unit circle
    p = np.roll(np.eye(5), 1, axis=1)
    p[0, 1] = 2.0
    expected = perron_root_by_charpoly(p)
    assert largest_eigenvalue(p) == pytest.approx(expected, rel=1e-9)


def test_reducible_block_triangular():
    a = np.array([[3.0, 1.0, 0.0], [0.0, 1.0, 5.0], [0.0, 0.0, 2.0]])
    assert largest_eigenvalue(a) == pytest.approx(3.0, rel=1e-10)


def test_sparse_input():
    a = sp.random(60, 60, density=0.1, random_state=1, format="csr")
    assert largest_eigenvalue(a) == pytest.approx(perron_root_by_charpoly(a.toarray()), rel=1e-8)


def test_rejects_negative_entries():
    with pytest.raises(ValueError):
        largest_eigenvalue(np.array([[1.0, -1.0], [0.0, 1.0]]))


def test_reports_non_convergence():
    rng = np.random.default_rng(0)
    with pytest.raises(PowerIterationError):
        largest_eigenvalue(rng.random((6, 6)), tol=1e-14, max_iter=3)


@pytest.mark.parametrize("seed", range(20))
def test_random_5x5_against_characteristic_polynomial(seed):
    a = np.random.default_rng(seed).random((5, 5))
    rho = largest_eigenvalue(a)
    assert abs(rho - perron_root_by_charpoly(a)) <= 1e-8 * max(1.0, rho)
