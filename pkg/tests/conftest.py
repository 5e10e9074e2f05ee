"""Shared fixtures: synthetic tapes and paths with controlled dynamics."""

import numpy as np
import pytest

from tradepath.marketdata import PathSeries

SESSION = 23400.0  # 6.5 hour session in seconds


def make_tape_text(rows):
    """Rows of (timestamp, symbol, price, size, buyer, seller) -> CSV text."""
    lines = ["timestamp,symbol,price,size,buyer,seller"]
    for r in rows:
        lines.append(",".join(str(v) for v in r))
    return "\n".join(lines) + "\n"


def poisson_times(rng, mean_gap, horizon=SESSION):
    """Arrival times over (0, horizon] with the close pinned as the last
    observation, so increments span the whole session."""
    gaps = rng.exponential(mean_gap, int(horizon / mean_gap * 1.5) + 8)
    times = np.cumsum(gaps)
    times = times[times < horizon - 1e-9]
    return np.append(times, horizon)


def drift_path(seed, mean_gap=2.0, drift=1e-4, horizon=SESSION, kind="inventory"):
    """Null path: no diffusion, just a linear drift observed at random times."""
    rng = np.random.default_rng(seed)
    times = poisson_times(rng, mean_gap, horizon)
    return PathSeries(times, drift * times, kind, horizon)


def brownian_path(seed, sigma, mean_gap=60.0, horizon=SESSION, kind="inventory"):
    """Diffusive path with constant volatility, observed at random times."""
    rng = np.random.default_rng(seed)
    times = poisson_times(rng, mean_gap, horizon)
    dt = np.diff(np.concatenate([[0.0], times]))
    values = np.cumsum(sigma * np.sqrt(dt) * rng.standard_normal(len(times)))
    return PathSeries(times, values, kind, horizon)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def simple_tape():
    return make_tape_text(
        [
            (0.0, "RY", 10.0, 100, "T1", "T2"),
            (60.0, "RY", 11.0, 100, "T2", "T1"),
        ]
    )
