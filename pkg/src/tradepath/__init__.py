"""Brownian-component tests for trader inventory and wealth paths, plus a
Monte Carlo benchmark of the matching optimal-execution rule."""

from . import btest, errors, estimation, execmodel, marketdata
from .btest import (
    RegularTestConfig,
    TestResult,
    async_test,
    batch_runner,
    estimate_eta,
    fictitious_augment,
    normal_abs_moment,
    power_variation,
    regular_test,
    sensitivity_sweep,
    truncated_quarticity,
    truncated_realized_volatility,
    truncation_level,
)
from .estimation import (
    EstimationInputs,
    estimate_impacts,
    estimate_inventory_vol,
    estimate_price_vol,
)
from .estimators import AsyncBrownianTest, OptimalExecutionSimulator, RegularBrownianTest
from .execmodel import (
    Ensemble,
    ExecutionParams,
    TradeGrid,
    ensemble_stats,
    eta_fn,
    optimal_rate,
    riccati_residual,
    simulate_approach1,
    simulate_approach2,
    v_fn,
)
from .marketdata import (
    IncrementSeries,
    PathSeries,
    TapeFormat,
    TradeRecord,
    activity_filter,
    async_increments,
    build_trader_paths,
    parse_tape,
    resample_regular,
)

__version__ = "0.1.0"

__all__ = [
    "AsyncBrownianTest",
    "Ensemble",
    "EstimationInputs",
    "ExecutionParams",
    "IncrementSeries",
    "OptimalExecutionSimulator",
    "PathSeries",
    "RegularBrownianTest",
    "RegularTestConfig",
    "TapeFormat",
    "TestResult",
    "TradeGrid",
    "TradeRecord",
    "activity_filter",
    "async_increments",
    "async_test",
    "batch_runner",
    "btest",
    "build_trader_paths",
    "ensemble_stats",
    "errors",
    "estimate_eta",
    "estimate_impacts",
    "estimate_inventory_vol",
    "estimate_price_vol",
    "estimation",
    "eta_fn",
    "execmodel",
    "fictitious_augment",
    "marketdata",
    "normal_abs_moment",
    "optimal_rate",
    "parse_tape",
    "power_variation",
    "regular_test",
    "resample_regular",
    "riccati_residual",
    "sensitivity_sweep",
    "simulate_approach1",
    "simulate_approach2",
    "truncated_quarticity",
    "truncated_realized_volatility",
    "truncation_level",
    "v_fn",
    "__version__",
]
