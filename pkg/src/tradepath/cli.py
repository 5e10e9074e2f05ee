"""Batch command-line interface.

Subcommands wire a trade tape through path reconstruction into the tests,
sweeps and multi-day tables, and through parameter estimation into the
Monte Carlo execution benchmark. Every command writes machine-readable
CSV/JSON artifacts plus a ``manifest.json`` holding the fully resolved
configuration, its hash and the tool version; rerunning a command with
``--config manifest.json`` regenerates the artifacts byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np
import tomli

from . import __version__, btest, estimation, execmodel, marketdata
from .btest import ASYNC, REGULAR, RegularTestConfig
from .errors import TradePathError
from .marketdata import INVENTORY, PAYMENT_SUM, TapeFormat, WEALTH_CONVENTIONS


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _write_manifest(out_dir: Path, command: str, config: dict, partial: bool = False) -> None:
    manifest = {
        "command": command,
        "config": config,
        "config_hash": _config_hash(config),
        "seed": config.get("seed"),
        "version": __version__,
        "partial": partial,
    }
    _write_json(out_dir / "manifest.json", manifest)


def _load_config_file(path: str) -> dict:
    p = Path(path)
    if p.suffix.lower() == ".toml":
        with open(p, "rb") as fh:
            data = tomli.load(fh)
    else:
        data = json.loads(p.read_text(encoding="utf-8"))
    # manifests nest the options under "config"
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    return data


def _resolve(cli_values: dict, config_path: str | None, defaults: dict) -> dict:
    """Merge option sources: defaults, then config file, then explicit flags."""
    merged = dict(defaults)
    if config_path:
        file_values = _load_config_file(config_path)
        unknown = set(file_values) - set(defaults)
        if unknown:
            raise click.ClickException(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_values)
    merged.update({k: v for k, v in cli_values.items() if v is not None})
    return merged


def _parse_columns(column_list: str) -> TapeFormat:
    names = [c.strip() for c in column_list.split(",")]
    if len(names) != 6:
        raise click.ClickException(
            "--columns needs 6 comma-separated names: time,symbol,price,size,buyer,seller"
        )
    return TapeFormat(
        timestamp=names[0],
        symbol=names[1],
        price=names[2],
        size=names[3],
        buyer=names[4],
        seller=names[5],
    )


def _float_list(values) -> list[float]:
    if isinstance(values, (list, tuple)):
        return [float(v) for v in values]
    try:
        return [float(v) for v in str(values).split(",") if str(v).strip() != ""]
    except ValueError as exc:
        raise click.ClickException(f"bad numeric list {values!r}: {exc}") from exc


def _load_records(cfg: dict):
    fmt = _parse_columns(cfg["columns"])
    if cfg.get("session_open") is not None:
        fmt = TapeFormat(
            timestamp=fmt.timestamp,
            symbol=fmt.symbol,
            price=fmt.price,
            size=fmt.size,
            buyer=fmt.buyer,
            seller=fmt.seller,
            session_open=float(cfg["session_open"]),
        )
    records = marketdata.parse_tape(cfg["tape"], fmt)
    if cfg.get("symbol"):
        records = [r for r in records if r.symbol == cfg["symbol"]]
        if not records:
            raise click.ClickException(f"no records for symbol {cfg['symbol']!r}")
    return records


def _build_path(cfg: dict) -> marketdata.PathSeries:
    records = _load_records(cfg)
    inventory, wealth = marketdata.build_trader_paths(
        records,
        cfg["trader"],
        wealth_convention=cfg["wealth_convention"],
        session_length=cfg.get("session_seconds"),
    )
    return inventory if cfg["process"] == INVENTORY else wealth


def _test_config(cfg: dict) -> RegularTestConfig:
    return RegularTestConfig(
        sigma_prime=float(cfg["sigma_prime"]),
        gamma=float(cfg["gamma"]),
        alpha_level=float(cfg["alpha"]),
        eta_estimator=cfg["eta_estimator"],
        seed=int(cfg["seed"]),
    )


def _out_dir(cfg: dict) -> Path:
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


class _Fail(click.ClickException):
    exit_code = 1


def _guard(fn):
    """Convert package errors into exit status 1 with a diagnostic."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TradePathError as exc:
            raise _Fail(f"{type(exc).__name__}: {exc}") from exc
        except ValueError as exc:
            raise _Fail(str(exc)) from exc

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
@click.version_option(version=__version__)
def main():
    """Brownian-component tests and optimal-execution benchmarks for trade tapes."""


# ---------------------------------------------------------------------------
# shared option sets

_TAPE_OPTIONS = [
    click.option("--tape", type=str, default=None, help="Tape CSV path."),
    click.option("--trader", type=str, default=None, help="Broker id to follow."),
    click.option("--symbol", type=str, default=None, help="Restrict to one ticker."),
    click.option(
        "--process",
        type=click.Choice([INVENTORY, "wealth"]),
        default=None,
        help="Which path to test (default inventory).",
    ),
    click.option(
        "--wealth-convention",
        type=click.Choice(list(WEALTH_CONVENTIONS)),
        default=None,
        help="Wealth reconstruction convention (default payment_sum).",
    ),
    click.option("--session-seconds", type=float, default=None, help="Session length T."),
    click.option("--session-open", type=float, default=None, help="Raw timestamp of the open."),
    click.option("--columns", type=str, default=None, help="Six column names, comma-separated."),
]

_TEST_OPTIONS = [
    click.option("--sigma-prime", type=float, default=None, help="Reference-noise scale."),
    click.option("--gamma", type=float, default=None, help="Truncation multiplier (default 3)."),
    click.option("--alpha", type=float, default=None, help="Test size (default 0.05)."),
    click.option(
        "--eta-estimator",
        type=click.Choice(list(btest.ETA_ESTIMATORS)),
        default=None,
        help="Variance-rate estimator for the truncation level.",
    ),
    click.option("--seed", type=int, default=None, help="Master seed."),
]

_COMMON_DEFAULTS = {
    "tape": None,
    "trader": None,
    "symbol": None,
    "process": INVENTORY,
    "wealth_convention": PAYMENT_SUM,
    "session_seconds": None,
    "session_open": None,
    "columns": "timestamp,symbol,price,size,buyer,seller",
    "sigma_prime": 1.0,
    "gamma": 3.0,
    "alpha": 0.05,
    "eta_estimator": btest.SAMPLE_VARIANCE,
    "seed": 0,
    "out_dir": ".",
}


def _apply(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return deco


def _require(cfg: dict, keys) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise click.ClickException(f"missing required option(s): {missing}")


# ---------------------------------------------------------------------------
# test-regular / test-async


@main.command("test-regular")
@_apply(_TAPE_OPTIONS)
@_apply(_TEST_OPTIONS)
@click.option("--bin-seconds", type=float, default=None, help="Regular grid bin (default 300).")
@click.option("--out-dir", type=str, default=None)
@click.option("--config", "config_path", type=str, default=None, help="TOML/JSON config or manifest.")
@_guard
def test_regular(config_path, **cli_values):
    """Regular-grid Brownian-component test on one trader's day."""
    defaults = dict(_COMMON_DEFAULTS, bin_seconds=300.0)
    cfg = _resolve(cli_values, config_path, defaults)
    _require(cfg, ["tape", "trader"])
    path = _build_path(cfg)
    incs = marketdata.resample_regular(path, float(cfg["bin_seconds"]))
    result = btest.regular_test(incs, _test_config(cfg))
    out = _out_dir(cfg)
    _write_json(out / "test_result.json", result.to_dict())
    _write_manifest(out, "test-regular", cfg)
    click.echo(
        f"statistic={result.statistic:.6g} p_value={result.p_value:.6g} "
        f"reject={result.reject_null}"
    )


@main.command("test-async")
@_apply(_TAPE_OPTIONS)
@_apply(_TEST_OPTIONS)
@click.option("--truncate/--no-truncate", default=None, help="Truncate before the power variations.")
@click.option("--out-dir", type=str, default=None)
@click.option("--config", "config_path", type=str, default=None)
@_guard
def test_async(config_path, **cli_values):
    """Asynchronous-sampling Brownian-component test on one trader's day."""
    defaults = dict(_COMMON_DEFAULTS, truncate=False)
    cfg = _resolve(cli_values, config_path, defaults)
    _require(cfg, ["tape", "trader"])
    path = _build_path(cfg)
    incs = marketdata.async_increments(path)
    result = btest.async_test(incs, _test_config(cfg), truncate=bool(cfg["truncate"]))
    out = _out_dir(cfg)
    _write_json(out / "test_result.json", result.to_dict())
    _write_manifest(out, "test-async", cfg)
    click.echo(
        f"statistic={result.statistic:.6g} p_value={result.p_value:.6g} "
        f"reject={result.reject_null}"
    )


# ---------------------------------------------------------------------------
# sweep


@main.command("sweep")
@_apply(_TAPE_OPTIONS)
@_apply(_TEST_OPTIONS)
@click.option("--sigma-grid", type=str, default=None, help="Comma list of sigma_prime values.")
@click.option("--gamma-grid", type=str, default=None, help="Comma list of gamma values.")
@click.option("--bin-seconds", type=float, default=None)
@click.option("--out-dir", type=str, default=None)
@click.option("--config", "config_path", type=str, default=None)
@_guard
def sweep(config_path, **cli_values):
    """Sensitivity sweep of the regular test over (sigma_prime, gamma)."""
    defaults = dict(_COMMON_DEFAULTS, bin_seconds=300.0, sigma_grid=None, gamma_grid=None)
    cfg = _resolve(cli_values, config_path, defaults)
    _require(cfg, ["tape", "trader", "sigma_grid"])
    if cfg.get("gamma_grid") is None:
        cfg["gamma_grid"] = str(cfg["gamma"])
    path = _build_path(cfg)
    rows = btest.sensitivity_sweep(
        path,
        _float_list(cfg["sigma_grid"]),
        _float_list(cfg["gamma_grid"]),
        _test_config(cfg),
        bin_seconds=float(cfg["bin_seconds"]),
    )
    out = _out_dir(cfg)
    _write_csv(out / "sweep.csv", ["sigma_prime", "gamma", "p_value"], rows)
    _write_manifest(out, "sweep", cfg)
    click.echo(f"wrote {len(rows)} sweep points")


# ---------------------------------------------------------------------------
# batch


@main.command("batch")
@click.option("--tapes-dir", type=str, default=None, help="Directory of per-day tape CSVs.")
@click.option("--traders", type=str, default=None, help="Comma list of broker ids.")
@click.option("--symbols", type=str, default=None, help="Comma list of tickers.")
@click.option("--mode", type=click.Choice([REGULAR, ASYNC]), default=None)
@click.option("--process", type=click.Choice([INVENTORY, "wealth"]), default=None)
@_apply(_TEST_OPTIONS)
@click.option("--bin-seconds", type=float, default=None)
@click.option("--min-rate", type=float, default=None, help="Trades per minute to include a day.")
@click.option(
    "--wealth-convention", type=click.Choice(list(WEALTH_CONVENTIONS)), default=None
)
@click.option("--session-seconds", type=float, default=None)
@click.option("--session-open", type=float, default=None)
@click.option("--columns", type=str, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--out-dir", type=str, default=None)
@click.option("--config", "config_path", type=str, default=None)
@_guard
def batch(config_path, **cli_values):
    """Rejection-percentage table over (traders x symbols x days)."""
    defaults = {
        "tapes_dir": None,
        "traders": None,
        "symbols": None,
        "mode": REGULAR,
        "process": INVENTORY,
        "sigma_prime": 1.0,
        "gamma": 3.0,
        "alpha": 0.05,
        "eta_estimator": btest.SAMPLE_VARIANCE,
        "seed": 0,
        "bin_seconds": 300.0,
        "min_rate": 1.0,
        "wealth_convention": PAYMENT_SUM,
        "session_seconds": None,
        "session_open": None,
        "columns": "timestamp,symbol,price,size,buyer,seller",
        "workers": 1,
        "out_dir": ".",
    }
    cfg = _resolve(cli_values, config_path, defaults)
    _require(cfg, ["tapes_dir", "traders", "symbols"])
    out = _out_dir(cfg)

    fmt = _parse_columns(cfg["columns"])
    if cfg.get("session_open") is not None:
        fmt = TapeFormat(
            timestamp=fmt.timestamp,
            symbol=fmt.symbol,
            price=fmt.price,
            size=fmt.size,
            buyer=fmt.buyer,
            seller=fmt.seller,
            session_open=float(cfg["session_open"]),
        )
    tape_files = sorted(Path(cfg["tapes_dir"]).glob("*.csv"))
    if not tape_files:
        raise _Fail(f"no *.csv tapes in {cfg['tapes_dir']}")
    traders = [t.strip() for t in cfg["traders"].split(",") if t.strip()]
    symbols = [s.strip() for s in cfg["symbols"].split(",") if s.strip()]

    try:
        tapes = {f.stem: marketdata.parse_tape(f, fmt) for f in tape_files}
        result = btest.batch_runner(
            tapes,
            traders,
            symbols,
            _test_config(cfg),
            mode=cfg["mode"],
            process=cfg["process"],
            bin_seconds=float(cfg["bin_seconds"]),
            min_rate=float(cfg["min_rate"]),
            wealth_convention=cfg["wealth_convention"],
            session_length=cfg.get("session_seconds"),
            workers=int(cfg["workers"]),
        )
    except Exception:
        _write_manifest(out, "batch", cfg, partial=True)
        raise

    _write_csv(out / "batch.csv", ["trader", *result.symbols], result.table_rows())
    count_rows = []
    for trader in result.traders:
        for symbol in result.symbols:
            cell = result.cells[(trader, symbol)]
            count_rows.append(
                [trader, symbol, cell.included, cell.rejected, cell.excluded, cell.degenerate]
            )
    _write_csv(
        out / "batch_counts.csv",
        ["trader", "symbol", "included", "rejected", "excluded", "degenerate"],
        count_rows,
    )
    _write_manifest(out, "batch", cfg)
    click.echo(f"wrote batch table for {len(traders)} traders x {len(symbols)} symbols")


# ---------------------------------------------------------------------------
# estimate


@main.command("estimate")
@_apply(_TAPE_OPTIONS)
@click.option("--prior-tapes-dir", type=str, default=None, help="Prior-day tapes for price vol.")
@click.option("--bin-seconds", type=float, default=None, help="Bin for spread/volume averages.")
@click.option("--impact-dt", type=float, default=None, help="Time unit of the impact formulas.")
@click.option("--per-sqrt-second", is_flag=True, default=None, help="Scale inventory vol by time.")
@click.option("--q0", type=float, default=None, help="Initial inventory for the grid/params.")
@click.option("--grid-out", type=str, default=None, help="Also write the trade grid CSV here.")
@click.option("--seed", type=int, default=None)
@click.option("--out-dir", type=str, default=None)
@click.option("--config", "config_path", type=str, default=None)
@_guard
def estimate(config_path, **cli_values):
    """Estimate execution-model parameters from a tape; emits params.json."""
    defaults = dict(
        _COMMON_DEFAULTS,
        prior_tapes_dir=None,
        bin_seconds=300.0,
        impact_dt=1.0,
        per_sqrt_second=False,
        q0=0.0,
        grid_out=None,
    )
    cfg = _resolve(cli_values, config_path, defaults)
    _require(cfg, ["tape", "trader"])
    records = _load_records(cfg)

    avg_spread, avg_volume = estimation.bin_spread_volume(
        records,
        bin_seconds=float(cfg["bin_seconds"]),
        session_length=cfg.get("session_seconds"),
    )
    inputs = estimation.EstimationInputs(
        avg_bin_spread=avg_spread,
        avg_bin_volume=avg_volume,
        dt=float(cfg["impact_dt"]),
    )
    alpha_hat, kappa_hat = estimation.estimate_impacts(inputs)

    if cfg.get("prior_tapes_dir"):
        prior_files = sorted(Path(cfg["prior_tapes_dir"]).glob("*.csv"))
        day_stds = []
        for f in prior_files[-estimation.PRICE_VOL_WINDOW_DAYS :]:
            day_records = marketdata.parse_tape(f, _parse_columns(cfg["columns"]))
            if cfg.get("symbol"):
                day_records = [r for r in day_records if r.symbol == cfg["symbol"]]
            if len(day_records) >= 3:
                day_stds.append(estimation.intraday_price_std([r.price for r in day_records]))
        sigma_price = estimation.estimate_price_vol(day_stds) if day_stds else 0.0
    else:
        sigma_price = estimation.intraday_price_std([r.price for r in records])

    grid = execmodel.grid_from_records(
        records,
        cfg["trader"],
        q0=float(cfg["q0"]),
        wealth_convention=cfg["wealth_convention"],
    )
    increments = np.diff(grid.actual_inventory, prepend=float(cfg["q0"]))
    sigma_inv = estimation.estimate_inventory_vol(
        increments,
        per_sqrt_second=bool(cfg["per_sqrt_second"]),
        # scale by the mean gap between trades; the stub interval from the
        # session open to the first trade is not a trade gap
        interval_lengths=np.diff(grid.times) if cfg["per_sqrt_second"] else None,
    )

    horizon = cfg.get("session_seconds") or float(grid.times[-1])
    params = estimation.params_from_estimates(
        alpha_hat,
        kappa_hat,
        sigma_price,
        sigma_inv,
        horizon=horizon,
        q0=float(cfg["q0"]),
    )
    out = _out_dir(cfg)
    _write_json(out / "params.json", params.to_dict())
    if cfg.get("grid_out"):
        execmodel.grid_to_csv(grid, cfg["grid_out"])
    _write_manifest(out, "estimate", cfg)
    click.echo(
        f"alpha_hat={alpha_hat:.6g} kappa_hat={kappa_hat:.6g} "
        f"sigma_price={sigma_price:.6g} sigma_inv={sigma_inv:.6g}"
    )


# ---------------------------------------------------------------------------
# simulate


@main.command("simulate")
@click.option("--grid", "grid_path", type=str, default=None, help="TradeGrid CSV from estimate.")
@_apply(_TAPE_OPTIONS)
@click.option("--params", "params_path", type=str, default=None, help="params.json from estimate.")
@click.option("--approach", type=int, default=None, help="1 (observed prices) or 2 (simulated).")
@click.option("--nsim", type=int, default=None, help="Scenario count.")
@click.option("--seed", type=int, default=None)
@click.option("--band-lo", type=float, default=None)
@click.option("--band-hi", type=float, default=None)
@click.option("--scenario-samples", type=int, default=None, help="Sample paths to export.")
@click.option("--workers", type=int, default=None)
@click.option("--q0", type=float, default=None, help="Override initial inventory.")
@click.option("--kappa-temp", type=float, default=None)
@click.option("--alpha-perm", type=float, default=None)
@click.option("--sigma-price", type=float, default=None)
@click.option("--sigma-inv", type=float, default=None)
@click.option("--terminal-penalty", type=float, default=None)
@click.option("--running-penalty", type=float, default=None)
@click.option("--horizon", type=float, default=None)
@click.option("--out-dir", type=str, default=None)
@click.option("--config", "config_path", type=str, default=None)
@_guard
def simulate(config_path, **cli_values):
    """Monte Carlo ensemble of the optimal rule against the trader's day."""
    defaults = dict(
        _COMMON_DEFAULTS,
        grid_path=None,
        params_path=None,
        approach=1,
        nsim=10_000,
        band_lo=5.0,
        band_hi=95.0,
        scenario_samples=5,
        workers=1,
        q0=None,
        kappa_temp=None,
        alpha_perm=None,
        sigma_price=None,
        sigma_inv=None,
        terminal_penalty=None,
        running_penalty=None,
        horizon=None,
    )
    cfg = _resolve(cli_values, config_path, defaults)

    if cfg.get("grid_path"):
        grid = execmodel.grid_from_csv(cfg["grid_path"])
    elif cfg.get("tape") and cfg.get("trader"):
        records = _load_records(cfg)
        grid = execmodel.grid_from_records(
            records,
            cfg["trader"],
            q0=float(cfg["q0"] or 0.0),
            wealth_convention=cfg["wealth_convention"],
        )
    else:
        raise click.ClickException("provide --grid or (--tape and --trader)")

    base = {}
    if cfg.get("params_path"):
        base = json.loads(Path(cfg["params_path"]).read_text(encoding="utf-8"))
    overrides = {
        "kappa_temp": cfg.get("kappa_temp"),
        "alpha_perm": cfg.get("alpha_perm"),
        "sigma_price": cfg.get("sigma_price"),
        "sigma_inv": cfg.get("sigma_inv"),
        "terminal_penalty": cfg.get("terminal_penalty"),
        "running_penalty": cfg.get("running_penalty"),
        "horizon": cfg.get("horizon"),
        "q0": cfg.get("q0"),
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    base.setdefault("horizon", float(grid.times[-1]))
    if "kappa_temp" not in base:
        raise click.ClickException("kappa_temp is required (via --params or --kappa-temp)")
    params = execmodel.ExecutionParams.from_dict(base)

    approach = int(cfg["approach"])
    if approach not in (1, 2):
        raise click.ClickException("--approach must be 1 or 2")
    simulate_fn = (
        execmodel.simulate_approach1 if approach == 1 else execmodel.simulate_approach2
    )
    ensemble = simulate_fn(
        grid,
        params,
        n_sim=int(cfg["nsim"]),
        seed=int(cfg["seed"]),
        band=(float(cfg["band_lo"]), float(cfg["band_hi"])),
        workers=int(cfg["workers"]),
    )
    summary = execmodel.ensemble_stats(ensemble, grid)

    out = _out_dir(cfg)
    _write_csv(
        out / "bands_inventory.csv",
        ["time", "lo", "hi", "actual"],
        zip(summary.times, summary.inventory_lo, summary.inventory_hi, grid.actual_inventory),
    )
    _write_csv(
        out / "bands_wealth.csv",
        ["time", "lo", "hi", "actual"],
        zip(summary.times, summary.wealth_lo, summary.wealth_hi, grid.actual_wealth),
    )
    k = min(int(cfg["scenario_samples"]), ensemble.n_sim)
    _write_csv(
        out / "scenarios_inventory.csv",
        ["time", *[f"scenario_{j}" for j in range(k)]],
        zip(summary.times, *[ensemble.inventory_paths[j] for j in range(k)]),
    )
    _write_csv(
        out / "scenarios_wealth.csv",
        ["time", *[f"scenario_{j}" for j in range(k)]],
        zip(summary.times, *[ensemble.wealth_paths[j] for j in range(k)]),
    )
    _write_csv(out / "kde.csv", ["x", "density"], zip(summary.kde_x, summary.kde_density))
    _write_json(
        out / "summary.json",
        {
            "approach": approach,
            "n_sim": ensemble.n_sim,
            "seed": ensemble.seed,
            "band_lo": summary.band_lo,
            "band_hi": summary.band_hi,
            "mean_terminal_wealth": summary.mean_terminal_wealth,
            "outperformance_pct": summary.outperformance_pct,
            "actual_terminal_wealth": float(grid.actual_wealth[-1]),
            "eta_branch": ensemble.eta_branch,
            "negative_price_count": ensemble.negative_price_count,
            "params": params.to_dict(),
        },
    )
    _write_manifest(out, "simulate", cfg)
    click.echo(
        f"mean_terminal_wealth={summary.mean_terminal_wealth:.6g} "
        f"outperformance={summary.outperformance_pct:.4g}% "
        f"eta_branch={ensemble.eta_branch}"
    )


if __name__ == "__main__":
    sys.exit(main())
