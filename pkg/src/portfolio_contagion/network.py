"""Bipartite bank-asset networks.

Links are stored as two parallel integer arrays (``link_bank``, ``link_asset``)
sorted by bank, with CSR-style pointers in both directions so the cascade
engine can walk bank -> assets and asset -> banks without Python loops.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np


class NetworkError(ValueError):
    """Raised for invalid network parameters or malformed network data."""


class DegreeStats(NamedTuple):
    mean_bank_degree: float
    mean_asset_degree: float
    crowding: float
    projected_mean_degree: float


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BipartiteNetwork:
    n_banks: int
    n_assets: int
    link_bank: np.ndarray
    link_asset: np.ndarray
    bank_ptr: np.ndarray = field(repr=False)
    asset_order: np.ndarray = field(repr=False)
    asset_ptr: np.ndarray = field(repr=False)

    @classmethod
    def from_links(cls, n_banks: int, n_assets: int, links: Iterable) -> "BipartiteNetwork":
        """Build a network from ``(bank, asset)`` pairs.

        Raises :class:`NetworkError` on out-of-range indices or duplicate links.
        """
        if n_banks < 1 or n_assets < 1:
            raise NetworkError("a network needs at least one bank and one asset")
        arr = np.asarray(list(links) if not isinstance(links, np.ndarray) else links, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise NetworkError("links must be a sequence of [bank, asset] pairs")
        banks, assets = arr[:, 0], arr[:, 1]
        if banks.size and (banks.min() < 0 or banks.max() >= n_banks):
            raise NetworkError("bank index out of range")
        if assets.size and (assets.min() < 0 or assets.max() >= n_assets):
            raise NetworkError("asset index out of range")
        key = banks * n_assets + assets
        order = np.argsort(key, kind="stable")
        key = key[order]
        if key.size > 1 and np.any(key[1:] == key[:-1]):
            raise NetworkError("duplicate (bank, asset) link")
        return cls._from_sorted_keys(n_banks, n_assets, key)

    @classmethod
    def _from_sorted_keys(cls, n_banks: int, n_assets: int, key: np.ndarray) -> "BipartiteNetwork":
        link_bank = key // n_assets
        link_asset = key % n_assets
        bank_ptr = np.zeros(n_banks + 1, dtype=np.int64)
        np.cumsum(np.bincount(link_bank, minlength=n_banks), out=bank_ptr[1:])
        asset_order = np.argsort(link_asset, kind="stable")
        asset_ptr = np.zeros(n_assets + 1, dtype=np.int64)
        np.cumsum(np.bincount(link_asset, minlength=n_assets), out=asset_ptr[1:])
        return cls(
            n_banks=int(n_banks),
            n_assets=int(n_assets),
            link_bank=_readonly(link_bank.astype(np.int64)),
            link_asset=_readonly(link_asset.astype(np.int64)),
            bank_ptr=_readonly(bank_ptr),
            asset_order=_readonly(asset_order),
            asset_ptr=_readonly(asset_ptr),
        )

    @property
    def n_links(self) -> int:
        return int(self.link_bank.size)

    @property
    def bank_degrees(self) -> np.ndarray:
        return np.diff(self.bank_ptr)

    @property
    def asset_degrees(self) -> np.ndarray:
        return np.diff(self.asset_ptr)

    def portfolio(self, bank: int) -> np.ndarray:
        return self.link_asset[self.bank_ptr[bank]:self.bank_ptr[bank + 1]]

    def holders(self, asset: int) -> np.ndarray:
        idx = self.asset_order[self.asset_ptr[asset]:self.asset_ptr[asset + 1]]
        return self.link_bank[idx]

    @property
    def bank_portfolios(self) -> list[list[int]]:
        return [self.portfolio(i).tolist() for i in range(self.n_banks)]

    @property
    def asset_holders(self) -> list[list[int]]:
        return [self.holders(j).tolist() for j in range(self.n_assets)]

    @property
    def links(self) -> np.ndarray:
        return np.column_stack([self.link_bank, self.link_asset])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteNetwork):
            return NotImplemented
        return (
            self.n_banks == other.n_banks
            and self.n_assets == other.n_assets
            and np.array_equal(self.link_bank, other.link_bank)
            and np.array_equal(self.link_asset, other.link_asset)
        )

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        return {
            "n_banks": self.n_banks,
            "n_assets": self.n_assets,
            "links": self.links.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BipartiteNetwork":
        try:
            return cls.from_links(int(data["n_banks"]), int(data["n_assets"]), data["links"])
        except (KeyError, TypeError) as exc:
            raise NetworkError(f"malformed network data: {exc}") from exc


def save_network(net: BipartiteNetwork, path: str | Path) -> None:
    Path(path).write_text(json.dumps(net.to_dict()))


def load_network(path: str | Path) -> BipartiteNetwork:
    return BipartiteNetwork.from_dict(json.loads(Path(path).read_text()))


def gen_poisson_bipartite(n_banks: int, n_assets: int, mean_bank_degree: float,
                          seed=None) -> BipartiteNetwork:
    """Bipartite Erdos-Renyi network: every bank-asset pair is linked
    independently with probability ``mean_bank_degree / n_assets``.

    Implemented by drawing the total link count from the matching binomial and
    then a uniform subset of pairs of that size, which has the same law as
    independent Bernoulli trials per pair.
    """
    if n_banks < 1 or n_assets < 1:
        raise NetworkError("n_banks and n_assets must be >= 1")
    p = mean_bank_degree / n_assets
    if not 0.0 <= p <= 1.0:
        raise NetworkError(f"link probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    n_pairs = n_banks * n_assets
    n_links = rng.binomial(n_pairs, p)
    key = np.sort(rng.choice(n_pairs, size=n_links, replace=False))
    return BipartiteNetwork._from_sorted_keys(n_banks, n_assets, key.astype(np.int64))


def gen_regular_bipartite(n_banks: int, n_assets: int, bank_degree: int, seed=None,
                          max_retries: int = 20) -> BipartiteNetwork:
    """Every bank gets exactly ``bank_degree`` distinct assets.

    Each bank's stubs are matched to uniformly random assets; a bank whose
    stubs hit the same asset twice is redrawn. After ``max_retries`` rounds
    the remaining banks draw a distinct subset directly, which has the same
    law as conditioning stub matching on simplicity.
    """
    k = int(bank_degree)
    if n_banks < 1 or n_assets < 1:
        raise NetworkError("n_banks and n_assets must be >= 1")
    if k < 0:
        raise NetworkError("bank_degree must be non-negative")
    if k > n_assets:
        raise NetworkError(f"cannot give {k} distinct assets to a bank when M={n_assets}")
    rng = np.random.default_rng(seed)
    stubs = rng.integers(0, n_assets, size=(n_banks, k))
    for _ in range(max_retries):
        s = np.sort(stubs, axis=1)
        bad = np.any(s[:, 1:] == s[:, :-1], axis=1) if k > 1 else np.zeros(n_banks, bool)
        if not bad.any():
            break
        stubs[bad] = rng.integers(0, n_assets, size=(int(bad.sum()), k))
    else:
        for i in np.flatnonzero(bad):
            stubs[i] = rng.choice(n_assets, size=k, replace=False)
    key = np.sort((np.arange(n_banks)[:, None] * n_assets + stubs).ravel())
    return BipartiteNetwork._from_sorted_keys(n_banks, n_assets, key.astype(np.int64))


def degree_stats(net: BipartiteNetwork) -> DegreeStats:
    mu_b = net.n_links / net.n_banks
    mu_a = net.n_links / net.n_assets
    return DegreeStats(mu_b, mu_a, net.n_banks / net.n_assets, mu_a * mu_b)
