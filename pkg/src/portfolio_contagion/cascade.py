"""Shock, fire-sale and reprice dynamics.

One call to :func:`step` liquidates every insolvent bank that has not yet
sold, adds the sold shares to each asset's cumulative liquidated fraction,
reprices all assets and re-tests solvency. Volumes are summed per asset
before repricing, so the order in which banks are visited is irrelevant.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .balance import FinancialSystem

GLOBAL_THRESHOLD = 0.05


class ShockKind(str, enum.Enum):
    ASSET = "asset"
    BANK = "bank"


class ShockError(ValueError):
    pass


@dataclass(frozen=True)
class Shock:
    kind: ShockKind
    target: int
    magnitude: float = 0.35

    def __post_init__(self):
        object.__setattr__(self, "kind", ShockKind(self.kind))
        if self.kind is ShockKind.ASSET and not 0 < self.magnitude <= 1:
            raise ShockError(f"devaluation magnitude {self.magnitude} outside (0, 1]")

    @classmethod
    def asset(cls, target: int, magnitude: float = 0.35) -> "Shock":
        return cls(ShockKind.ASSET, target, magnitude)

    @classmethod
    def bank(cls, target: int) -> "Shock":
        return cls(ShockKind.BANK, target, 0.0)


@dataclass
class CascadeResult:
    n_banks: int
    failures_by_step: list[list[int]]
    n_steps: int
    threshold: float = GLOBAL_THRESHOLD
    final_prices: np.ndarray | None = field(default=None, repr=False)

    @property
    def failed(self) -> set[int]:
        return {i for s in self.failures_by_step for i in s}

    @property
    def n_failed(self) -> int:
        return sum(len(s) for s in self.failures_by_step)

    @property
    def failed_fraction(self) -> float:
        return self.n_failed / self.n_banks

    @property
    def is_global(self) -> bool:
        return self.failed_fraction >= self.threshold

    def to_dict(self) -> dict:
        return {
            "n_banks": self.n_banks,
            "n_steps": self.n_steps,
            "n_failed": self.n_failed,
            "failed_fraction": self.failed_fraction,
            "threshold": self.threshold,
            "is_global": self.is_global,
            "failed": sorted(self.failed),
            "failures_by_step": self.failures_by_step,
            "final_prices": None if self.final_prices is None else self.final_prices.tolist(),
        }

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            Path(path).write_text(text)
        return text


def apply_shock(sys: FinancialSystem, shock: Shock) -> list[int]:
    """Apply the initial shock and return the banks that fail at time 0."""
    if sys.shocked:
        raise ShockError("system has already been shocked")
    if shock.kind is ShockKind.ASSET:
        if not 0 <= shock.target < sys.n_assets:
            raise ShockError(f"asset {shock.target} out of range")
        sys.market.shock_factor[shock.target] *= 1.0 - shock.magnitude
        sys.market.reprice(sys.impact)
        newly = sys.solvent & ~sys.solvency_mask()
        sys.solvent[newly] = False
        failed = np.flatnonzero(newly).tolist()
    else:
        if not 0 <= shock.target < sys.n_banks:
            raise ShockError(f"bank {shock.target} out of range")
        sys.solvent[shock.target] = False
        failed = [int(shock.target)]
    sys.shocked = True
    return failed


def is_solvent(sys: FinancialSystem, bank: int) -> bool:
    """Solvency at current prices; ignores whether the bank already failed."""
    return bool(sys.solvency_mask()[bank])


def step(sys: FinancialSystem) -> list[int]:
    net, market = sys.network, sys.market
    selling = ~sys.solvent & ~sys.liquidated
    if not selling.any():
        return []
    on_link = selling[net.link_bank]
    sold = np.bincount(net.link_asset[on_link], weights=sys.holdings[on_link],
                       minlength=net.n_assets)
    touched = sold > 0
    x = market.liquidated_fraction
    x[touched] = np.minimum(x[touched] + sold[touched] / market.total_shares[touched], 1.0)
    market.reprice(sys.impact)
    sys.liquidated |= selling
    newly = sys.solvent & ~sys.solvency_mask()
    sys.solvent[newly] = False
    return np.flatnonzero(newly).tolist()


def run_cascade(sys: FinancialSystem, shock: Shock,
                global_threshold: float = GLOBAL_THRESHOLD) -> CascadeResult:
    """Shock a fresh system and iterate :func:`step` to its fixed point.

    ``failures_by_step[0]`` holds the banks failed by the shock itself and
    entry ``t`` the banks failing in step ``t``; ``n_steps`` counts calls to
    :func:`step`, including the final one that finds nothing new.
    """
    by_step = [apply_shock(sys, shock)]
    n_steps = 0
    while True:
        newly = step(sys)
        n_steps += 1
        if not newly:
            break
        by_step.append(newly)
    return CascadeResult(sys.n_banks, by_step, n_steps, global_threshold,
                         sys.market.prices.copy())
