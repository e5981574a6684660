import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_failed, random_tiny_system
from portfolio_contagion.balance import DEFAULT_ALPHA, build_uniform_system
from portfolio_contagion.cascade import (
    Shock,
    ShockError,
    apply_shock,
    is_solvent,
    run_cascade,
    step,
)
from portfolio_contagion.network import BipartiteNetwork, gen_poisson_bipartite


def star(k):
    """One bank holding k assets, plus a degree-1 bank on asset 0."""
    links = [(0, a) for a in range(k)] + [(1, 0)]
    return BipartiteNetwork.from_links(2, k, links)


def test_asset_shock_sets_price():
    sys = build_uniform_system(star(3), 20)
    apply_shock(sys, Shock.asset(0, 0.35))
    assert sys.market.prices[0] == pytest.approx(0.65)


def test_zero_magnitude_rejected():
    with pytest.raises(ShockError):
        Shock.asset(0, 0.0)


def test_out_of_range_and_double_shock():
    sys = build_uniform_system(star(3), 20)
    with pytest.raises(ShockError):
        apply_shock(sys, Shock.asset(5))
    with pytest.raises(ShockError):
        apply_shock(sys, Shock.bank(2))
    apply_shock(sys, Shock.bank(0))
    with pytest.raises(ShockError):
        apply_shock(sys, Shock.bank(1))


def test_bank_failure_on_degree_zero_bank():
    net = BipartiteNetwork.from_links(3, 1, [(0, 0), (1, 0)])
    res = run_cascade(build_uniform_system(net, 20), Shock.bank(2))
    assert res.failed == {2}
    assert res.failed_fraction == pytest.approx(1 / 3)


def test_unshocked_banks_are_solvent(fig1_net):
    sys = build_uniform_system(fig1_net, 20)
    assert all(is_solvent(sys, i) for i in range(4))


def test_degree_one_bank_fails_on_35_percent_drop():
    sys = build_uniform_system(star(7), 20)
    sys.market.prices[0] = 0.65
    # loss 0.35 > equity 0.05
    assert not is_solvent(sys, 1)


def test_degree_seven_bank_sits_on_the_boundary():
    sys = build_uniform_system(star(7), 20)
    sys.market.prices[0] = 0.65
    # loss 0.35 / 7 equals equity 1/20 exactly: not strictly greater
    assert is_solvent(sys, 0)


def test_step_without_insolvent_banks_is_a_fixed_point(fig1_net):
    sys = build_uniform_system(fig1_net, 20)
    before = sys.market.prices.copy()
    assert step(sys) == []
    assert np.array_equal(sys.market.prices, before)


def test_two_bank_step(two_bank_system):
    sys = two_bank_system
    apply_shock(sys, Shock.bank(0))
    assert step(sys) == [1]
    assert sys.market.liquidated_fraction[0] == pytest.approx(0.5)
    price = math.exp(-DEFAULT_ALPHA * 0.5)
    assert sys.market.prices[0] == pytest.approx(0.5905, abs=1e-4)
    assert 1 - price == pytest.approx(0.4095, abs=1e-4)


def test_two_bank_cascade(two_bank_system):
    res = run_cascade(two_bank_system, Shock.bank(0), 0.05)
    assert res.failed_fraction == 1.0
    assert res.n_steps == 2
    assert res.is_global
    assert res.failures_by_step == [[0], [1]]


def test_well_diversified_bank_survives_total_loss_of_one_asset():
    # degree 20 >= leverage 20: losing one whole asset costs at most 1/20
    links = [(0, a) for a in range(20)] + [(1, 0)]
    net = BipartiteNetwork.from_links(2, 20, links)
    res = run_cascade(build_uniform_system(net, 20), Shock.asset(0, 1.0))
    assert 0 not in res.failed


def test_no_holdings_no_failures():
    net = gen_poisson_bipartite(50, 50, 0.0, seed=0)
    res = run_cascade(build_uniform_system(net, 20), Shock.asset(3, 0.35))
    assert res.failed_fraction == 0.0
    assert not res.is_global


def test_global_threshold_is_inclusive(two_bank_system):
    res = run_cascade(two_bank_system, Shock.bank(0), global_threshold=1.0)
    assert res.is_global


def test_result_json(two_bank_system):
    res = run_cascade(two_bank_system, Shock.bank(0))
    doc = json.loads(res.to_json())
    assert doc["failures_by_step"] == [[0], [1]]
    assert doc["failed"] == [0, 1]
    assert len(doc["final_prices"]) == 1


def test_unleveraged_banks_never_fail():
    net = gen_poisson_bipartite(400, 300, 3.0, seed=11)
    for lev in (0.5, 1.0):
        res = run_cascade(build_uniform_system(net, lev, alpha=50.0), Shock.asset(0, 1.0))
        assert res.failed == set()
        res = run_cascade(build_uniform_system(net, lev, alpha=50.0), Shock.bank(7))
        assert res.failed == {7}


@pytest.mark.parametrize("mu", [1.5, 3.0, 6.0])
def test_monotone_prices_and_bounded_steps(mu):
    net = gen_poisson_bipartite(500, 500, mu, seed=4)
    sys = build_uniform_system(net, 20)
    apply_shock(sys, Shock.asset(1, 0.35))
    prices, x = sys.market.prices.copy(), sys.market.liquidated_fraction.copy()
    failed = set(np.flatnonzero(~sys.solvent))
    steps = 0
    while True:
        new = step(sys)
        steps += 1
        assert np.all(sys.market.prices <= prices)
        assert np.all(sys.market.liquidated_fraction >= x)
        assert np.all(sys.market.liquidated_fraction <= 1.0)
        now = set(np.flatnonzero(~sys.solvent))
        assert failed <= now
        prices, x, failed = sys.market.prices.copy(), sys.market.liquidated_fraction.copy(), now
        if not new:
            break
    assert steps <= net.n_banks


def test_deterministic_and_partitioned():
    net = gen_poisson_bipartite(800, 800, 3.0, seed=9)
    a = run_cascade(build_uniform_system(net, 20), Shock.asset(10, 0.35))
    b = run_cascade(build_uniform_system(net, 20), Shock.asset(10, 0.35))
    assert a.failures_by_step == b.failures_by_step
    flat = [i for s in a.failures_by_step for i in s]
    assert len(flat) == len(set(flat)) == len(a.failed)


def test_bank_order_does_not_matter():
    net = gen_poisson_bipartite(300, 300, 3.0, seed=5)
    perm = np.random.default_rng(0).permutation(net.n_banks)
    inv = np.argsort(perm)
    relabelled = BipartiteNetwork.from_links(
        net.n_banks, net.n_assets, np.column_stack([inv[net.link_bank], net.link_asset]))
    for target in range(0, 300, 37):
        a = run_cascade(build_uniform_system(net, 20), Shock.bank(target))
        b = run_cascade(build_uniform_system(relabelled, 20), Shock.bank(int(inv[target])))
        assert {int(inv[i]) for i in a.failed} == b.failed


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**63 - 1))
def test_engine_matches_brute_force(seed):
    sys, shock = random_tiny_system(np.random.default_rng(seed))
    expected = oracle_failed(sys, shock)
    assert run_cascade(sys, shock).failed == expected
