"""Command-line experiments.

    portfolio-contagion cascade --config cfg.json --output result.json
    portfolio-contagion sweep   --config cfg.json --axis mean_bank_degree --values 0.5,1:14:1 --output sweep.csv
    portfolio-contagion phase   --config cfg.json --axis mu_b --values 1:20:1 --axis lambda --values 5:40:1 --output phase.csv
    portfolio-contagion replay  result.json.manifest.json

Every output ``X`` is written together with ``X.manifest.json``, which holds
the fully resolved config and can be passed to ``replay``.

Exit status: 0 success, 2 usage or config error, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from .balance import (DEFAULT_ALPHA, DEFAULT_LEVERAGE, BalanceSheetError, FinancialSystem,
                      build_uniform_system)
from .cascade import GLOBAL_THRESHOLD, Shock, ShockError, run_cascade
from .montecarlo import SWEEP_AXES, ExperimentConfig, sweep, write_sweep_csv
from .network import BipartiteNetwork, NetworkError, gen_poisson_bipartite
from .stability.kernel import DEFAULT_K_MAX, DEFAULT_SAMPLES
from .stability.phase import MCParams, boundary_flags, canonical_axis, xi1_grid

DEFAULTS = {
    "n_banks": 10_000,
    "n_assets": 10_000,
    "mean_bank_degree": 5.0,
    "leverage": DEFAULT_LEVERAGE,
    "alpha": DEFAULT_ALPHA,
    "shock": {"kind": "asset", "magnitude": 0.35},
    "runs": 1000,
    "threshold": GLOBAL_THRESHOLD,
    "seed": 0,
}
EXTRA_KEYS = {"network", "system", "samples", "k_max"}
AXIS_ALIASES = {"mu_b": "mean_bank_degree", "lambda": "leverage", "n": "crowding"}


class ConfigError(ValueError):
    pass


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def resolve_config(raw: dict) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(DEFAULTS) - EXTRA_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = {**DEFAULTS, **raw}
    shock = {**DEFAULTS["shock"], **(raw.get("shock") or {})}
    if not isinstance(shock, dict) or shock.get("kind") not in ("asset", "bank"):
        raise ConfigError("shock.kind must be 'asset' or 'bank'")
    bad = set(shock) - {"kind", "magnitude", "target"}
    if bad:
        raise ConfigError(f"unknown shock keys: {sorted(bad)}")
    cfg["shock"] = shock
    try:
        for key in ("n_banks", "n_assets", "runs", "seed"):
            cfg[key] = int(cfg[key])
        for key in ("mean_bank_degree", "leverage", "alpha", "threshold"):
            cfg[key] = float(cfg[key])
        shock["magnitude"] = float(shock["magnitude"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    return cfg


def load_config(path) -> dict:
    if path is None:
        return resolve_config({})
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    return resolve_config(raw)


def parse_values(text: str) -> list[float]:
    """Comma-separated numbers; ``a:b:step`` expands to an inclusive range."""
    out: list[float] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            if ":" in part:
                a, b, s = (float(x) for x in part.split(":"))
                if s <= 0:
                    raise ValueError
                count = int(np.floor((b - a) / s + 1e-9)) + 1
                out.extend(round(a + i * s, 12) for i in range(count))
            else:
                out.append(float(part))
        except ValueError:
            raise ConfigError(f"cannot parse values {part!r}") from None
    if not out:
        raise ConfigError("empty value list")
    return out


def experiment_config(cfg: dict, runs=None) -> ExperimentConfig:
    return ExperimentConfig(
        n_banks=cfg["n_banks"], n_assets=cfg["n_assets"],
        mean_bank_degree=cfg["mean_bank_degree"], leverage=cfg["leverage"], alpha=cfg["alpha"],
        shock_kind=cfg["shock"]["kind"], shock_magnitude=cfg["shock"]["magnitude"],
        runs=cfg["runs"] if runs is None else runs, global_threshold=cfg["threshold"],
        base_seed=cfg["seed"])


def write_manifest(output: Path, command: str, cfg: dict, options: dict) -> None:
    manifest = {
        "command": command,
        "config": cfg,
        "options": options,
        "seed": cfg["seed"],
        "version": version(),
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "outputs": [str(output)],
    }
    Path(f"{output}.manifest.json").write_text(json.dumps(manifest, indent=2))


def do_cascade(cfg: dict, output: Path) -> dict:
    rng = np.random.default_rng(cfg["seed"])
    try:
        if "system" in cfg:
            system = FinancialSystem.from_dict(cfg["system"])
        else:
            if "network" in cfg:
                net = BipartiteNetwork.from_dict(cfg["network"])
            else:
                net = gen_poisson_bipartite(cfg["n_banks"], cfg["n_assets"],
                                            cfg["mean_bank_degree"], rng)
            system = build_uniform_system(net, cfg["leverage"], cfg["alpha"])
        shock_cfg = cfg["shock"]
        size = system.n_assets if shock_cfg["kind"] == "asset" else system.n_banks
        target = shock_cfg.get("target")
        target = int(rng.integers(size)) if target is None else int(target)
        shock = Shock(shock_cfg["kind"], target, shock_cfg["magnitude"])
    except (NetworkError, BalanceSheetError, ShockError, KeyError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    result = run_cascade(system, shock, cfg["threshold"])
    doc = {"shock": {"kind": shock.kind.value, "target": shock.target,
                     "magnitude": shock.magnitude}, **result.to_dict()}
    output.write_text(json.dumps(doc, indent=2))
    return doc


def do_sweep(cfg: dict, axis: str, values: list[float], workers: int, output: Path):
    axis = AXIS_ALIASES.get(axis, axis)
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown axis {axis!r}; expected one of {SWEEP_AXES}")
    try:
        base = experiment_config(cfg)
        rows = sweep(base, axis, values, workers=workers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    write_sweep_csv(rows, output)
    return rows


def do_phase(cfg: dict, axes: list[str], values: list[list[float]], mc: MCParams, output: Path):
    try:
        names = [canonical_axis(a) for a in axes]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if len(set(names)) != len(names):
        raise ConfigError("each axis may appear once")
    fixed = {"mu_b": cfg["mean_bank_degree"], "n": cfg["n_banks"] / cfg["n_assets"],
             "leverage": cfg["leverage"]}
    fixed = {k: v for k, v in fixed.items() if k not in names}
    names, grids, xi = xi1_grid(dict(zip(names, values)), fixed, mc)
    flags = boundary_flags(xi)
    with open(output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["mu_b", "n", "lambda", "xi1", "unstable", "boundary"])
        for idx in np.ndindex(xi.shape):
            point = {**fixed, **{k: grids[d][idx[d]] for d, k in enumerate(names)}}
            writer.writerow([repr(float(point["mu_b"])), repr(float(point["n"])),
                             repr(float(point["leverage"])), repr(float(xi[idx])),
                             int(xi[idx] > 1.0), int(flags[idx])])
    return names, grids, xi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="portfolio-contagion",
        description="Fire-sale contagion on bank-asset networks.",
        epilog=("Config defaults: n_banks=n_assets=10000, mean_bank_degree=5, leverage=20, "
                f"alpha={DEFAULT_ALPHA:.4f}, shock=asset@0.35, runs=1000, threshold=0.05, seed=0."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file (keys default as listed in --help)")
        sp.add_argument("--seed", type=int, help="overrides the config seed")
        sp.add_argument("--output", required=True, help="output file")

    c = sub.add_parser("cascade", help="run a single cascade and write its record as JSON")
    common(c)

    s = sub.add_parser("sweep", help="Monte-Carlo sweep of one parameter, written as CSV")
    common(s)
    s.add_argument("--axis", required=True,
                   help="mean_bank_degree (mu_b) | leverage (lambda) | alpha | crowding (n)")
    s.add_argument("--values", required=True, help="e.g. 0.5,1:14:1")
    s.add_argument("--runs", type=int, help="overrides the config run count")
    s.add_argument("--threads", type=int, default=1, help="worker processes")

    ph = sub.add_parser("phase", help="largest branching eigenvalue over a parameter grid")
    common(ph)
    ph.add_argument("--axis", action="append", required=True,
                    help="mu_b | n | lambda; repeat once per grid axis")
    ph.add_argument("--values", action="append", required=True,
                    help="values for the matching --axis")
    ph.add_argument("--samples", type=int, help=f"Monte-Carlo samples (default {DEFAULT_SAMPLES})")
    ph.add_argument("--k-max", type=int, help=f"largest bank degree (default {DEFAULT_K_MAX})")

    r = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    r.add_argument("manifest")
    r.add_argument("--output", help="write here instead of the recorded path")
    return p


def execute(command: str, cfg: dict, options: dict, output: Path) -> None:
    if command == "cascade":
        do_cascade(cfg, output)
    elif command == "sweep":
        do_sweep(cfg, options["axis"], options["values"], options.get("threads", 1), output)
    elif command == "phase":
        mc = MCParams(alpha=cfg["alpha"], k_max=options["k_max"], samples=options["samples"],
                      seed=cfg["seed"])
        do_phase(cfg, options["axes"], options["values"], mc, output)
    else:
        raise ConfigError(f"unknown command {command!r}")
    write_manifest(output, command, cfg, options)


def _from_args(args) -> tuple[dict, dict]:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    options: dict = {}
    if args.command == "sweep":
        if args.runs is not None:
            if args.runs < 1:
                raise ConfigError("--runs must be >= 1")
            cfg["runs"] = args.runs
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        options = {"axis": args.axis, "values": parse_values(args.values),
                   "threads": args.threads}
    elif args.command == "phase":
        if len(args.axis) != len(args.values):
            raise ConfigError("give one --values per --axis")
        options = {"axes": args.axis, "values": [parse_values(v) for v in args.values],
                   "samples": args.samples or cfg.get("samples", DEFAULT_SAMPLES),
                   "k_max": args.k_max or cfg.get("k_max", DEFAULT_K_MAX)}
    return cfg, options


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            try:
                manifest = json.loads(Path(args.manifest).read_text())
                command, options = manifest["command"], manifest["options"]
                cfg = resolve_config(manifest["config"])
                output = Path(args.output or manifest["outputs"][0])
            except (OSError, json.JSONDecodeError, KeyError, IndexError) as exc:
                raise ConfigError(f"unusable manifest: {exc}") from exc
        else:
            cfg, options = _from_args(args)
            command, output = args.command, Path(args.output)
        execute(command, cfg, options, output)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure: report, exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
