import math

import numpy as np
import pytest

from portfolio_contagion.balance import (
    DEFAULT_ALPHA,
    BalanceSheetError,
    FinancialSystem,
    build_uniform_system,
    calibrate_alpha,
    load_system,
    portfolio_value,
    save_system,
)
from portfolio_contagion.network import BipartiteNetwork, gen_poisson_bipartite


def test_leverage_20_equity_is_four_percent_of_total_assets(fig1_net):
    sys = build_uniform_system(fig1_net, leverage=20)
    total_assets = sys.initial_risky_assets + sys.cash
    assert np.allclose(sys.initial_equity, 0.05)
    assert np.allclose(sys.initial_equity / total_assets, 0.04)
    assert np.allclose(sys.leverage, 20)


def test_uniform_split(fig1_net):
    sys = build_uniform_system(fig1_net, leverage=20)
    assert sys.sheet(1).holdings == {0: 0.5, 1: 0.5}
    assert sys.sheet(0).holdings == {0: 1.0}


def test_balance_identity():
    net = gen_poisson_bipartite(300, 200, 3.0, seed=2)
    sys = build_uniform_system(net, leverage=13.0)
    e = sys.initial_risky_assets + sys.cash - sys.liabilities
    assert np.array_equal(e, sys.initial_equity)
    assert np.all(sys.initial_equity > 0)
    assert np.all(sys.solvency_mask())


def test_degree_zero_bank_holds_cash_only():
    net = BipartiteNetwork.from_links(2, 1, [(0, 0)])
    sheet = build_uniform_system(net, 20).sheet(1)
    assert sheet.holdings == {}
    assert sheet.initial_equity == sheet.cash
    assert sheet.leverage == 1.0


def test_total_shares_equal_member_holdings(fig1_net):
    sys = build_uniform_system(fig1_net, 20)
    assert sys.market.total_shares.tolist() == [1.5, 1.0, 1.5]


def test_builder_rejects_bad_parameters(fig1_net):
    with pytest.raises(BalanceSheetError):
        build_uniform_system(fig1_net, leverage=0)
    with pytest.raises(BalanceSheetError):
        build_uniform_system(fig1_net, leverage=20, alpha=0)


def test_calibrate_alpha_reference_value():
    alpha = calibrate_alpha(0.10, 0.10)
    assert alpha == pytest.approx(1.0536, abs=1e-4)
    assert math.exp(-alpha * 0.1) == pytest.approx(0.9, abs=1e-6)
    assert alpha == DEFAULT_ALPHA


def test_calibrate_alpha_closed_form():
    assert calibrate_alpha(0.5, 1.0) == pytest.approx(math.log(2))
    for x in (0.01, 0.3, 0.9):
        assert calibrate_alpha(x, x) >= 1.0


@pytest.mark.parametrize("drop, at", [(0, 0.1), (1, 0.1), (0.1, 0), (0.1, 1.5)])
def test_calibrate_alpha_domain(drop, at):
    with pytest.raises(ValueError):
        calibrate_alpha(drop, at)


def test_impact_function_shape():
    sys = build_uniform_system(BipartiteNetwork.from_links(1, 1, [(0, 0)]), 20)
    x = np.linspace(0, 1, 11)
    f = sys.impact(x)
    assert f[0] == 1.0
    assert np.all(np.diff(f) < 0)


def test_portfolio_value(fig1_net):
    sys = build_uniform_system(fig1_net, 20)
    assert portfolio_value(sys, 1) == pytest.approx(1.0)
    sys.market.prices[0] = 0.65
    assert portfolio_value(sys, 1) == pytest.approx(0.825)
    empty = build_uniform_system(BipartiteNetwork.from_links(2, 1, [(0, 0)]), 20)
    assert portfolio_value(empty, 1) == 0.0


def test_system_json_round_trip(tmp_path, fig1_net):
    sys = build_uniform_system(fig1_net, 17.0, alpha=0.8)
    path = tmp_path / "sys.json"
    save_system(sys, path)
    back = load_system(path)
    assert back.network == sys.network
    assert np.allclose(back.initial_equity, sys.initial_equity)
    assert np.allclose(back.leverage, 17.0)
    assert back.impact.alpha == 0.8


def test_system_loader_checks_equity():
    data = {
        "n_banks": 1, "n_assets": 1,
        "banks": [{"cash": 0.0, "liabilities": 2.0, "holdings": [{"asset": 0, "shares": 1.0}]}],
    }
    with pytest.raises(BalanceSheetError):
        FinancialSystem.from_dict(data)
    data["banks"][0]["liabilities"] = 0.9
    sys = FinancialSystem.from_dict(data)
    assert sys.leverage[0] == pytest.approx(10.0)
