"""Balance sheets, market state and the assembled financial system.

Currency is expressed in units of a bank's initial risky investment ``A0``.
Per-link quantities live in arrays aligned with ``network.link_bank``.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .network import BipartiteNetwork, NetworkError

#: Calibrated so that selling 10% of an asset moves its price by 10%.
DEFAULT_ALPHA = -math.log1p(-0.1) / 0.1
DEFAULT_LEVERAGE = 20.0
#: Cash as a fraction of risky assets under the 80/20 asset/cash split.
CASH_RATIO = 0.25
#: Absolute slack (in units of A0) on the solvency test, so that a loss equal
#: to equity up to rounding counts as solvent.
SOLVENCY_TOL = 1e-12


class BalanceSheetError(ValueError):
    pass


@dataclass(frozen=True)
class ImpactFunction:
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not self.alpha > 0:
            raise BalanceSheetError("alpha must be positive")

    def __call__(self, x):
        return np.exp(-self.alpha * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class BalanceSheet:
    holdings: dict[int, float]
    cash: float
    liabilities: float
    initial_equity: float
    initial_risky_assets: float
    leverage: float


@dataclass
class MarketState:
    prices: np.ndarray
    shock_factor: np.ndarray
    liquidated_fraction: np.ndarray
    total_shares: np.ndarray

    def reprice(self, impact: ImpactFunction) -> None:
        self.prices = self.shock_factor * impact(self.liquidated_fraction)


class FinancialSystem:
    """A network with balance sheets attached and a mutable market state.

    ``holdings`` is per link (aligned with ``network.link_bank``); the other
    balance-sheet arrays are per bank.
    """

    def __init__(self, network: BipartiteNetwork, holdings, cash, liabilities,
                 alpha: float = DEFAULT_ALPHA, prices=None):
        self.network = network
        self.impact = ImpactFunction(alpha)
        self.holdings = np.asarray(holdings, dtype=float)
        self.cash = np.asarray(cash, dtype=float)
        self.liabilities = np.asarray(liabilities, dtype=float)
        if self.holdings.shape != (network.n_links,):
            raise BalanceSheetError("need exactly one holding per link")
        if self.cash.shape != (network.n_banks,) or self.liabilities.shape != (network.n_banks,):
            raise BalanceSheetError("cash and liabilities must have one entry per bank")
        if np.any(self.holdings <= 0):
            raise BalanceSheetError("holdings on a link must be positive")
        p0 = np.ones(network.n_assets) if prices is None else np.asarray(prices, dtype=float)
        if p0.shape != (network.n_assets,) or np.any(p0 <= 0):
            raise BalanceSheetError("initial prices must be positive, one per asset")
        total = np.bincount(network.link_asset, weights=self.holdings,
                            minlength=network.n_assets).astype(float)
        self.initial_prices = p0
        self.market = MarketState(p0.copy(), p0.copy(), np.zeros(network.n_assets), total)
        self.initial_risky_assets = self.bank_value(p0)
        self.initial_equity = self.initial_risky_assets + self.cash - self.liabilities
        self.solvent = np.ones(network.n_banks, dtype=bool)
        self.liquidated = np.zeros(network.n_banks, dtype=bool)
        self.shocked = False

    @property
    def n_banks(self) -> int:
        return self.network.n_banks

    @property
    def n_assets(self) -> int:
        return self.network.n_assets

    @property
    def leverage(self) -> np.ndarray:
        """A0/E0 per bank; banks with no risky assets report 1."""
        a0, e0 = self.initial_risky_assets, self.initial_equity
        lev = np.ones_like(a0)
        ok = (a0 > 0) & (e0 > 0)
        lev[ok] = a0[ok] / e0[ok]
        lev[(a0 > 0) & (e0 <= 0)] = np.inf
        return lev

    def bank_value(self, prices=None) -> np.ndarray:
        p = self.market.prices if prices is None else prices
        net = self.network
        return np.bincount(net.link_bank, weights=self.holdings * p[net.link_asset],
                           minlength=net.n_banks).astype(float)

    def losses(self) -> np.ndarray:
        return self.initial_risky_assets - self.bank_value()

    def solvency_mask(self) -> np.ndarray:
        """Banks satisfying A0 - sum_j Q_ij p_j <= E0 at current prices."""
        return self.losses() <= self.initial_equity + SOLVENCY_TOL

    def sheet(self, bank: int) -> BalanceSheet:
        net = self.network
        lo, hi = net.bank_ptr[bank], net.bank_ptr[bank + 1]
        return BalanceSheet(
            holdings=dict(zip(net.link_asset[lo:hi].tolist(), self.holdings[lo:hi].tolist())),
            cash=float(self.cash[bank]),
            liabilities=float(self.liabilities[bank]),
            initial_equity=float(self.initial_equity[bank]),
            initial_risky_assets=float(self.initial_risky_assets[bank]),
            leverage=float(self.leverage[bank]),
        )

    def copy(self) -> "FinancialSystem":
        return copy.deepcopy(self)

    def to_dict(self) -> dict:
        net = self.network
        banks = []
        for i in range(net.n_banks):
            lo, hi = net.bank_ptr[i], net.bank_ptr[i + 1]
            banks.append({
                "cash": float(self.cash[i]),
                "liabilities": float(self.liabilities[i]),
                "holdings": [{"asset": int(a), "shares": float(q)}
                             for a, q in zip(net.link_asset[lo:hi], self.holdings[lo:hi])],
            })
        return {
            "n_banks": net.n_banks,
            "n_assets": net.n_assets,
            "links": net.links.tolist(),
            "alpha": self.impact.alpha,
            "banks": banks,
            "assets": [{"price": float(p)} for p in self.initial_prices],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FinancialSystem":
        """Load a system; links are taken from the per-bank holdings.

        If a top-level ``links`` list is also present it must agree with them.
        Equity and leverage are recomputed and must be positive and finite.
        """
        try:
            n_banks, n_assets = int(data["n_banks"]), int(data["n_assets"])
            banks = data["banks"]
            if len(banks) != n_banks:
                raise BalanceSheetError("'banks' must have n_banks entries")
            pairs, shares = [], {}
            for i, b in enumerate(banks):
                for h in b["holdings"]:
                    pairs.append((i, int(h["asset"])))
                    shares[(i, int(h["asset"]))] = float(h["shares"])
            net = BipartiteNetwork.from_links(n_banks, n_assets, pairs)
            if "links" in data:
                listed = BipartiteNetwork.from_links(n_banks, n_assets, data["links"])
                if listed != net:
                    raise BalanceSheetError("'links' disagrees with bank holdings")
            holdings = [shares[(int(i), int(a))] for i, a in zip(net.link_bank, net.link_asset)]
            cash = [float(b["cash"]) for b in banks]
            liabilities = [float(b["liabilities"]) for b in banks]
            prices = None
            if "assets" in data:
                prices = [float(a["price"]) for a in data["assets"]]
            alpha = float(data.get("alpha", DEFAULT_ALPHA))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (BalanceSheetError, NetworkError)):
                raise
            raise BalanceSheetError(f"malformed system data: {exc}") from exc
        sys = cls(net, holdings, cash, liabilities, alpha=alpha, prices=prices)
        if np.any(sys.initial_equity <= 0):
            raise BalanceSheetError("every bank needs positive initial equity")
        return sys


def build_uniform_system(net: BipartiteNetwork, leverage: float = DEFAULT_LEVERAGE,
                         alpha: float = DEFAULT_ALPHA) -> FinancialSystem:
    """Homogeneous balance sheets: A0 = 1 split evenly over each bank's assets,
    cash 0.25, equity 1/leverage, liabilities fill the gap.

    Banks without assets hold only cash and carry no liabilities.
    """
    if not leverage > 0:
        raise BalanceSheetError("leverage must be positive")
    if not alpha > 0:
        raise BalanceSheetError("alpha must be positive")
    deg = net.bank_degrees
    holdings = 1.0 / deg[net.link_bank]
    has_assets = deg > 0
    cash = np.full(net.n_banks, CASH_RATIO)
    liabilities = np.where(has_assets, 1.0 + CASH_RATIO - 1.0 / leverage, 0.0)
    return FinancialSystem(net, holdings, cash, liabilities, alpha=alpha)


def calibrate_alpha(drop: float, at_liquidated: float) -> float:
    """Impact strength such that selling ``at_liquidated`` of an asset lowers
    its price by ``drop``."""
    if not 0 < drop < 1:
        raise ValueError("drop must lie in (0, 1)")
    if not 0 < at_liquidated <= 1:
        raise ValueError("at_liquidated must lie in (0, 1]")
    return -math.log1p(-drop) / at_liquidated


def portfolio_value(sys: FinancialSystem, bank: int) -> float:
    if not 0 <= bank < sys.n_banks:
        raise IndexError(f"bank {bank} out of range")
    net = sys.network
    lo, hi = net.bank_ptr[bank], net.bank_ptr[bank + 1]
    return float(np.dot(sys.holdings[lo:hi], sys.market.prices[net.link_asset[lo:hi]]))


def save_system(sys: FinancialSystem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(sys.to_dict()))


def load_system(path: str | Path) -> FinancialSystem:
    return FinancialSystem.from_dict(json.loads(Path(path).read_text()))
