"""Estimate the execution-model constants from tape data.

The price-impact coefficients scale a spread-per-volume ratio by fixed
cross-sectional regression constants; the price volatility averages per-day
standard deviations of asynchronous trade-price increments over a trailing
window; the inventory volatility is the plain sample standard deviation of
the trader's same-day inventory increments, used directly as the model's
inventory noise scale.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import as_1d_float_array, check_positive
from .errors import EmptyInput, TooFewObservations, ZeroVolume
from .execmodel import ExecutionParams

# spread/volume regression constants for the permanent and temporary impact
PERMANENT_IMPACT_COEF = 0.22299
TEMPORARY_IMPACT_COEF = 0.07176

DEFAULT_TERMINAL_PENALTY = 0.03
DEFAULT_RUNNING_PENALTY = 9.9e-7

PRICE_VOL_WINDOW_DAYS = 10


@dataclass
class EstimationInputs:
    """Raw quantities feeding the estimators.

    ``dt`` is the bin length in the time unit the impact coefficients were
    fitted under; it is taken as given rather than derived, because the
    fitting unit is a convention of the coefficient source.
    """

    avg_bin_spread: float
    avg_bin_volume: float
    dt: float
    intraday_stds: np.ndarray | None = None
    inventory_increments: np.ndarray | None = None

    def __post_init__(self):
        if self.avg_bin_spread < 0:
            raise ValueError("avg_bin_spread must be >= 0")
        if self.avg_bin_volume <= 0:
            raise ZeroVolume("avg_bin_volume must be > 0")
        check_positive("dt", self.dt)


def estimate_impacts(inputs: EstimationInputs) -> tuple[float, float]:
    """Permanent and temporary impact coefficients:
    (0.22299, 0.07176) * (avg_bin_spread / avg_bin_volume) / dt."""
    ratio = inputs.avg_bin_spread / inputs.avg_bin_volume / inputs.dt
    return PERMANENT_IMPACT_COEF * ratio, TEMPORARY_IMPACT_COEF * ratio


def intraday_price_std(prices) -> float:
    """Per-day standard deviation of asynchronous trade-price increments
    (sample std, n-1 denominator)."""
    prices = as_1d_float_array("prices", prices)
    if len(prices) < 3:
        raise TooFewObservations("need at least 3 prices for an intraday std")
    return float(np.std(np.diff(prices), ddof=1))


def estimate_price_vol(intraday_stds) -> float:
    """Average of per-day intraday price standard deviations; warns when
    fewer than the ten-day window is supplied."""
    stds = as_1d_float_array("intraday_stds", intraday_stds)
    if len(stds) == 0:
        raise EmptyInput("need at least one per-day standard deviation")
    if len(stds) < PRICE_VOL_WINDOW_DAYS:
        warnings.warn(
            f"price volatility averaged over {len(stds)} day(s); "
            f"{PRICE_VOL_WINDOW_DAYS} is the intended window",
            stacklevel=2,
        )
    return float(np.mean(stds))


def estimate_inventory_vol(
    increments,
    per_sqrt_second: bool = False,
    interval_lengths=None,
) -> float:
    """Sample standard deviation of the same-day inventory increments.

    The raw convention (no time scaling) feeds the Euler schemes directly.
    ``per_sqrt_second`` divides by sqrt(mean interval) for callers who want
    a rate-like scale instead; it requires the matching interval lengths.
    """
    increments = as_1d_float_array("increments", increments)
    if len(increments) < 2:
        raise TooFewObservations("need at least 2 increments for a std")
    sigma = float(np.std(increments, ddof=1))
    if per_sqrt_second:
        if interval_lengths is None:
            raise ValueError("per_sqrt_second scaling requires interval_lengths")
        intervals = as_1d_float_array("interval_lengths", interval_lengths)
        if len(intervals) == 0 or np.any(intervals <= 0):
            raise ValueError("interval_lengths must be positive and nonempty")
        sigma /= float(np.sqrt(np.mean(intervals)))
    return sigma


def bin_spread_volume(
    records, bin_seconds: float = 300.0, session_length: float | None = None
) -> tuple[float, float]:
    """Average per-bin price range (a spread proxy from trades alone) and
    average per-bin traded volume, over nonempty bins."""
    check_positive("bin_seconds", bin_seconds)
    times = np.array([r.timestamp for r in records])
    prices = np.array([r.price for r in records])
    sizes = np.array([float(r.size) for r in records])
    if len(times) == 0:
        raise EmptyInput("no records to bin")
    horizon = session_length if session_length is not None else float(times[-1])
    horizon = max(horizon, float(times[-1]))
    n_bins = max(1, int(np.ceil(horizon / bin_seconds)))
    # a trade exactly at the close belongs to the last bin
    bins = np.minimum((times / bin_seconds).astype(int), n_bins - 1)
    spreads = []
    volumes = []
    for b in np.unique(bins):
        in_bin = bins == b
        spreads.append(float(prices[in_bin].max() - prices[in_bin].min()))
        volumes.append(float(sizes[in_bin].sum()))
    avg_volume = float(np.mean(volumes))
    if avg_volume <= 0:
        raise ZeroVolume("average bin volume is zero")
    return float(np.mean(spreads)), avg_volume


def params_from_estimates(
    alpha_hat: float,
    kappa_hat: float,
    sigma_price: float,
    sigma_inv: float,
    horizon: float,
    q0: float = 0.0,
    terminal_penalty: float = DEFAULT_TERMINAL_PENALTY,
    running_penalty: float = DEFAULT_RUNNING_PENALTY,
) -> ExecutionParams:
    """Assemble ExecutionParams from the individual estimates, with the
    shipped penalty defaults."""
    return ExecutionParams(
        kappa_temp=kappa_hat,
        horizon=horizon,
        alpha_perm=alpha_hat,
        sigma_price=sigma_price,
        sigma_inv=sigma_inv,
        terminal_penalty=terminal_penalty,
        running_penalty=running_penalty,
        q0=q0,
    )
