"""Seeded ensembles of cascades and one-dimensional parameter sweeps.

Run ``r`` of sweep point ``i`` draws everything (network, shock target) from
``numpy.random.default_rng(SeedSequence([base_seed, i, r]))``. Results are
gathered by run index, so the statistics do not depend on the number of
worker processes.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .balance import DEFAULT_ALPHA, DEFAULT_LEVERAGE, build_uniform_system
from .cascade import GLOBAL_THRESHOLD, Shock, ShockKind, run_cascade
from .network import gen_poisson_bipartite

SWEEP_AXES = ("mean_bank_degree", "leverage", "alpha", "crowding")
CSV_COLUMNS = ["axis", "value", "mu_b", "n", "lambda", "alpha", "shock_kind", "runs",
               "p_contagion", "p_stderr", "cond_extent", "cond_count", "base_seed"]


@dataclass(frozen=True)
class ExperimentConfig:
    n_banks: int = 10_000
    n_assets: int = 10_000
    mean_bank_degree: float = 5.0
    leverage: float = DEFAULT_LEVERAGE
    alpha: float = DEFAULT_ALPHA
    shock_kind: str = "asset"
    shock_magnitude: float = 0.35
    runs: int = 1000
    global_threshold: float = GLOBAL_THRESHOLD
    base_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.n_banks < 1 or self.n_assets < 1:
            raise ValueError("n_banks and n_assets must be >= 1")
        if not 0 <= self.mean_bank_degree <= self.n_assets:
            raise ValueError("mean_bank_degree must lie in [0, n_assets]")
        if not self.leverage > 0 or not self.alpha > 0:
            raise ValueError("leverage and alpha must be positive")
        ShockKind(self.shock_kind)
        if self.shock_kind == "asset" and not 0 < self.shock_magnitude <= 1:
            raise ValueError("asset shock magnitude must lie in (0, 1]")
        if not 0 < self.global_threshold <= 1:
            raise ValueError("global_threshold must lie in (0, 1]")

    @property
    def crowding(self) -> float:
        return self.n_banks / self.n_assets


@dataclass(frozen=True)
class EnsembleStats:
    runs: int
    contagion_probability: float
    probability_stderr: float
    conditional_extent_mean: float
    conditional_extent_count: int

    @classmethod
    def from_fractions(cls, fractions: np.ndarray, threshold: float) -> "EnsembleStats":
        fractions = np.asarray(fractions, dtype=float)
        runs = fractions.size
        hit = fractions >= threshold
        count = int(hit.sum())
        p = count / runs
        extent = float(fractions[hit].mean()) if count else math.nan
        return cls(runs, p, math.sqrt(p * (1 - p) / runs), extent, count)


def run_seed(base_seed: int, stream: int, run: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(base_seed), int(stream), int(run)])


def single_run(cfg: ExperimentConfig, stream: int, run: int) -> float:
    """Failed fraction of one seeded cascade."""
    rng = np.random.default_rng(run_seed(cfg.base_seed, stream, run))
    net = gen_poisson_bipartite(cfg.n_banks, cfg.n_assets, cfg.mean_bank_degree, rng)
    sys = build_uniform_system(net, cfg.leverage, cfg.alpha)
    if cfg.shock_kind == "asset":
        shock = Shock.asset(int(rng.integers(cfg.n_assets)), cfg.shock_magnitude)
    else:
        shock = Shock.bank(int(rng.integers(cfg.n_banks)))
    return run_cascade(sys, shock, cfg.global_threshold).failed_fraction


def _run_chunk(args) -> list[float]:
    cfg, stream, runs = args
    return [single_run(cfg, stream, r) for r in runs]


def _chunks(cfg: ExperimentConfig, stream: int, workers: int):
    per = max(1, math.ceil(cfg.runs / (4 * workers)))
    return [(cfg, stream, range(lo, min(lo + per, cfg.runs))) for lo in range(0, cfg.runs, per)]


def run_fractions(cfgs: Sequence[ExperimentConfig], streams: Sequence[int],
                  workers: int = 1) -> list[np.ndarray]:
    """Per-run failed fractions for several configs, in run order."""
    jobs = [(i, c) for i, (cfg, st) in enumerate(zip(cfgs, streams))
            for c in _chunks(cfg, st, workers)]
    if workers <= 1:
        outputs = [_run_chunk(c) for _, c in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_chunk, [c for _, c in jobs]))
    per_cfg: list[list[float]] = [[] for _ in cfgs]
    for (i, _), out in zip(jobs, outputs):
        per_cfg[i].extend(out)
    return [np.asarray(v) for v in per_cfg]


def run_ensemble(cfg: ExperimentConfig, workers: int = 1, stream: int = 0) -> EnsembleStats:
    fractions = run_fractions([cfg], [stream], workers)[0]
    return EnsembleStats.from_fractions(fractions, cfg.global_threshold)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    config: ExperimentConfig
    stats: EnsembleStats

    def csv_record(self) -> dict:
        c, s = self.config, self.stats
        return {
            "axis": self.axis,
            "value": self.value,
            "mu_b": c.mean_bank_degree,
            "n": c.crowding,
            "lambda": c.leverage,
            "alpha": c.alpha,
            "shock_kind": c.shock_kind,
            "runs": s.runs,
            "p_contagion": s.contagion_probability,
            "p_stderr": s.probability_stderr,
            "cond_extent": s.conditional_extent_mean,
            "cond_count": s.conditional_extent_count,
            "base_seed": c.base_seed,
        }


def config_at(cfg: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    if axis == "mean_bank_degree":
        return replace(cfg, mean_bank_degree=float(value))
    if axis == "leverage":
        return replace(cfg, leverage=float(value))
    if axis == "alpha":
        return replace(cfg, alpha=float(value))
    if axis == "crowding":
        if not value > 0:
            raise ValueError("crowding must be positive")
        return replace(cfg, n_assets=max(1, round(cfg.n_banks / value)))
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def sweep(cfg: ExperimentConfig, axis: str, values: Iterable[float],
          workers: int = 1) -> list[SweepRow]:
    """One ensemble per value; point ``i`` uses seed stream ``i``."""
    values = [float(v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one value")
    cfgs = [config_at(cfg, axis, v) for v in values]
    fractions = run_fractions(cfgs, list(range(len(cfgs))), workers)
    return [SweepRow(axis, v, c, EnsembleStats.from_fractions(f, c.global_threshold))
            for v, c, f in zip(values, cfgs, fractions)]


def estimate_transition(table, floor_sigmas: float = 2.0):
    """Smallest and largest axis values whose contagion probability clears
    ``floor_sigmas`` binomial standard errors; ``None`` if none does.

    ``table`` holds :class:`SweepRow` objects or ``(value, EnsembleStats)``
    pairs.
    """
    points = [(r.value, r.stats) if isinstance(r, SweepRow) else (r[0], r[1]) for r in table]
    above = sorted(v for v, s in points
                   if s.contagion_probability > 0
                   and s.contagion_probability > floor_sigmas * s.probability_stderr)
    if not above:
        return None
    return above[0], above[-1]


def write_sweep_csv(rows: Iterable[SweepRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v
                             for k, v in row.csv_record().items()})


def config_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)
