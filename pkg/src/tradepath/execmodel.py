"""Optimal execution with a diffusive inventory, and Monte Carlo benchmarks.

The model: a trader controls their trading rate nu against linear permanent
(``alpha_perm``) and temporary (``kappa_temp``) price impact, pays a running
inventory penalty ``running_penalty`` and a terminal one ``terminal_penalty``,
and - the departure from the classical setup - carries Brownian noise of
scale ``sigma_inv`` on the inventory itself (with the matching term on the
wealth). The optimal rate is linear feedback

    nu(t, q) = (alpha_perm - eta(t)) / (2 * kappa_temp) * q,

where eta solves a scalar Riccati ODE backward from eta(T) = 2 * A. When
alpha_perm**2 < 4 * kappa_temp * running_penalty the ODE has a closed form;
otherwise it is integrated numerically (RK4), which covers parameter sets
that violate the discriminant condition marginally.

Two Euler schemes replay the feedback rule on the trade-time grid of a real
trader's day: approach 1 prices the wealth flows with the observed trade
prices (no spread cost, since those prices already crossed the spread);
approach 2 simulates the impacted price alongside and charges the
temporary-impact spread.
"""

from __future__ import annotations

import csv
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._rng import scenario_rng
from ._validation import as_1d_float_array, check_nonnegative, check_positive
from .errors import RiccatiBlowup, TooFewObservations
from .marketdata import PAYMENT_SUM, trader_events

CLOSED_FORM = "closed_form"
RK4 = "rk4"

_RK4_STEP_DIVISOR = 10_000


@dataclass(frozen=True)
class ExecutionParams:
    """Constants of the execution model.

    ``sigma_inv`` is the inventory noise scale (shares per sqrt-second) and
    ``sigma_price`` the mid-price volatility (currency per sqrt-second).
    ``q_target`` is kept for the wire format; only a zero target is supported
    by the closed-form solution.
    """

    kappa_temp: float
    horizon: float
    alpha_perm: float = 0.0
    sigma_price: float = 0.0
    sigma_inv: float = 0.0
    terminal_penalty: float = 0.03
    running_penalty: float = 9.9e-7
    q0: float = 0.0
    q_target: float = 0.0

    def __post_init__(self):
        check_positive("kappa_temp", self.kappa_temp)
        check_positive("horizon", self.horizon)
        check_nonnegative("sigma_price", self.sigma_price)
        check_nonnegative("sigma_inv", self.sigma_inv)
        check_nonnegative("terminal_penalty", self.terminal_penalty)
        check_nonnegative("running_penalty", self.running_penalty)

    def has_closed_form(self) -> bool:
        return self.alpha_perm**2 < 4.0 * self.kappa_temp * self.running_penalty

    def to_dict(self) -> dict:
        return {
            "kappa_temp": self.kappa_temp,
            "horizon": self.horizon,
            "alpha_perm": self.alpha_perm,
            "sigma_price": self.sigma_price,
            "sigma_inv": self.sigma_inv,
            "terminal_penalty": self.terminal_penalty,
            "running_penalty": self.running_penalty,
            "q0": self.q0,
            "q_target": self.q_target,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExecutionParams":
        return cls(**{k: payload[k] for k in cls.__dataclass_fields__ if k in payload})


def _require_zero_target(p: ExecutionParams) -> None:
    if p.q_target != 0.0:
        raise ValueError(
            "only a zero terminal inventory target is supported; shift the "
            "problem so the target is zero"
        )


@dataclass
class TradeGrid:
    """A real trader's day: trade times, trade prices, and the realized
    inventory and wealth right after each trade."""

    times: np.ndarray
    prices: np.ndarray
    actual_inventory: np.ndarray
    actual_wealth: np.ndarray

    def __post_init__(self):
        self.times = as_1d_float_array("times", self.times)
        self.prices = as_1d_float_array("prices", self.prices)
        self.actual_inventory = as_1d_float_array(
            "actual_inventory", self.actual_inventory
        )
        self.actual_wealth = as_1d_float_array("actual_wealth", self.actual_wealth)
        n = len(self.times)
        if not (len(self.prices) == len(self.actual_inventory) == len(self.actual_wealth) == n):
            raise ValueError("grid columns must have equal length")
        if n == 0:
            raise ValueError("grid must be nonempty")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.prices <= 0):
            raise ValueError("prices must be > 0")

    def __len__(self) -> int:
        return len(self.times)


@dataclass
class Ensemble:
    """Simulated scenario paths on a trade-time grid.

    Paths are (n_sim, N) matrices whose column 0 is the shared initial state
    at the first grid time. ``price_paths`` is None for approach 1, which
    reuses the observed prices.
    """

    times: np.ndarray
    inventory_paths: np.ndarray
    wealth_paths: np.ndarray
    price_paths: np.ndarray | None
    band_lo: float
    band_hi: float
    seed: int
    approach: int
    eta_branch: str
    negative_price_count: int = 0

    @property
    def n_sim(self) -> int:
        return self.inventory_paths.shape[0]


# ---------------------------------------------------------------------------
# Riccati feedback slope


def riccati_rhs(eta: float, p: ExecutionParams):
    """Right-hand side of the backward feedback-slope ODE:
    eta' = -(alpha/kappa) eta + eta**2 / (2 kappa) + (alpha**2/(2 kappa) - 2 phi)."""
    alpha, kappa, phi = p.alpha_perm, p.kappa_temp, p.running_penalty
    return -(alpha / kappa) * eta + eta * eta / (2.0 * kappa) + (
        alpha * alpha / (2.0 * kappa) - 2.0 * phi
    )


def _eta_closed_form(t: np.ndarray, p: ExecutionParams) -> np.ndarray:
    alpha, kappa, phi, a_pen = (
        p.alpha_perm,
        p.kappa_temp,
        p.running_penalty,
        p.terminal_penalty,
    )
    rho = math.sqrt(phi / kappa)
    half_slope = alpha / (2.0 * kappa)
    tau = p.horizon - np.asarray(t, dtype=np.float64)
    growth = np.exp(2.0 * rho * tau)
    numerator = (alpha * alpha / (2.0 * kappa) - 2.0 * phi) * (growth - 1.0) - 2.0 * a_pen * (
        (half_slope + rho) * growth - (half_slope - rho)
    )
    denominator = (
        (half_slope - rho) * growth
        - (half_slope + rho)
        - (a_pen / kappa) * (growth - 1.0)
    )
    # the terminal condition is definitional; pin it to avoid the rounding
    # of the 0/0-adjacent quotient at tau = 0
    return np.where(tau == 0.0, 2.0 * a_pen, numerator / denominator)


def _eta_rk4(t_points: np.ndarray, p: ExecutionParams, max_step: float | None = None) -> np.ndarray:
    """Backward RK4 integration from eta(T) = 2 * terminal_penalty, landing
    exactly on every requested time. Raises RiccatiBlowup on divergence.

    Steps are capped at ``max_step`` (horizon / 10^4 by default) and at the
    local stability scale kappa / |eta - alpha|; market-scale parameters make
    the ODE stiff in a thin layer at the horizon, where an explicit scheme
    with fixed steps would explode.
    """
    if max_step is None:
        max_step = p.horizon / _RK4_STEP_DIVISOR
    t_points = np.asarray(t_points, dtype=np.float64)
    order = np.argsort(t_points)[::-1]  # integrate from T downward
    sorted_ts = t_points[order]
    if len(sorted_ts) and (sorted_ts[0] > p.horizon + 1e-12 * max(1.0, p.horizon) or sorted_ts[-1] < 0):
        raise ValueError("evaluation times must lie in [0, horizon]")

    blowup_scale = 1e12 * max(
        1.0,
        abs(2.0 * p.terminal_penalty),
        abs(p.alpha_perm) + 2.0 * math.sqrt(p.kappa_temp * p.running_penalty),
    )
    max_steps = 20_000_000
    tiny = 1e-12 * max(1.0, p.horizon)

    eta = 2.0 * p.terminal_penalty
    current_t = p.horizon
    steps = 0
    values = np.empty(len(sorted_ts))
    for k, target in enumerate(sorted_ts):
        while current_t - target > tiny:
            local_rate = abs(eta - p.alpha_perm) / p.kappa_temp
            h_stable = 0.5 / local_rate if local_rate > 0 else math.inf
            h = min(max_step, h_stable, current_t - target)
            k1 = riccati_rhs(eta, p)
            k2 = riccati_rhs(eta - 0.5 * h * k1, p)
            k3 = riccati_rhs(eta - 0.5 * h * k2, p)
            k4 = riccati_rhs(eta - h * k3, p)
            eta = eta - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            current_t -= h
            steps += 1
            if not math.isfinite(eta) or abs(eta) > blowup_scale:
                raise RiccatiBlowup(
                    f"backward integration diverged near t = {current_t:.6g}"
                )
            if steps > max_steps:
                raise RiccatiBlowup(
                    "step budget exhausted; parameters are too stiff for the "
                    "numerical fallback"
                )
        current_t = target
        values[k] = eta

    out = np.empty(len(t_points))
    out[order] = values
    return out


def eta_on_grid(times, p: ExecutionParams) -> tuple[np.ndarray, str]:
    """Feedback slope eta evaluated at the given times, plus the branch used
    (closed form when the discriminant condition holds, RK4 otherwise)."""
    _require_zero_target(p)
    times = np.asarray(times, dtype=np.float64)
    if times.size and (times.min() < -1e-12 or times.max() > p.horizon * (1 + 1e-12) + 1e-12):
        raise ValueError("evaluation times must lie in [0, horizon]")
    if p.has_closed_form():
        return _eta_closed_form(times, p), CLOSED_FORM
    return _eta_rk4(times, p), RK4


def eta_fn(t: float, p: ExecutionParams) -> float:
    """Feedback slope at one time; eta(T) = 2 * terminal_penalty exactly."""
    values, _ = eta_on_grid(np.array([t]), p)
    return float(values[0])


def v_fn(t: float, q: float, p: ExecutionParams) -> float:
    """Marginal inventory value eta(t) * q (the affine offset is identically
    zero for a zero inventory target)."""
    return eta_fn(t, p) * q


def optimal_rate(t: float, q: float, p: ExecutionParams) -> float:
    """Optimal trading rate (alpha - eta(t)) / (2 kappa) * q, in shares per
    second; negative means selling."""
    return (p.alpha_perm - eta_fn(t, p)) / (2.0 * p.kappa_temp) * q


def riccati_residual(p: ExecutionParams, n_points: int = 100, step: float | None = None) -> float:
    """Max absolute defect of the closed form against the ODE, measured by
    central differences on an interior grid."""
    if not p.has_closed_form():
        raise ValueError("closed form does not apply; residual undefined")
    if step is None:
        step = p.horizon * 1e-4
    ts = np.linspace(step, p.horizon - step, n_points)
    eta_mid = _eta_closed_form(ts, p)
    eta_up = _eta_closed_form(ts + step, p)
    eta_dn = _eta_closed_form(ts - step, p)
    derivative = (eta_up - eta_dn) / (2.0 * step)
    residual = derivative - riccati_rhs(eta_mid, p)
    return float(np.max(np.abs(residual)))


# ---------------------------------------------------------------------------
# Monte Carlo schemes


def _scenario_draws(seed: int, n_sim: int, n_steps: int, blocks: int, workers: int) -> list[np.ndarray]:
    """Per-scenario standard-normal draws, ``blocks`` arrays of shape
    (n_sim, n_steps). Scenario j's rows come from its own derived stream, so
    the result is independent of chunking and worker count."""

    def draw_rows(indices):
        rows = np.empty((len(indices), blocks, n_steps))
        for row, j in enumerate(indices):
            rng = scenario_rng(seed, j)
            for b in range(blocks):
                rows[row, b] = rng.standard_normal(n_steps)
        return rows

    indices = np.arange(n_sim)
    if workers > 1 and n_sim > 1:
        chunks = np.array_split(indices, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(draw_rows, chunks))
        stacked = np.concatenate(parts, axis=0)
    else:
        stacked = draw_rows(indices)
    return [stacked[:, b, :] for b in range(blocks)]


def _prepare(grid: TradeGrid, p: ExecutionParams, n_sim: int):
    if n_sim < 1:
        raise ValueError("n_sim must be >= 1")
    if len(grid) < 2:
        raise TooFewObservations("simulation needs a grid with at least 2 times")
    if grid.times[-1] > p.horizon * (1 + 1e-12) + 1e-12:
        raise ValueError("grid times extend past the model horizon")
    dt = np.diff(grid.times)
    sq_dt = np.sqrt(dt)
    eta_vals, branch = eta_on_grid(grid.times[:-1], p)
    rate_coef = (p.alpha_perm - eta_vals) / (2.0 * p.kappa_temp)
    step_gain = float(np.max(np.abs(rate_coef) * dt))
    if step_gain > 2.0:
        # |1 + rate * dt| > 1: the Euler replay oscillates and grows; this
        # almost always means the impact coefficients' time unit does not
        # match the grid's seconds
        warnings.warn(
            f"feedback rate times grid step reaches {step_gain:.3g}; the Euler "
            "scheme is unstable on this grid (check the impact time unit)",
            stacklevel=3,
        )
    return dt, sq_dt, rate_coef, branch


def simulate_approach1(
    grid: TradeGrid,
    p: ExecutionParams,
    n_sim: int,
    seed: int = 0,
    band: tuple[float, float] = (5.0, 95.0),
    workers: int = 1,
) -> Ensemble:
    """Replay the optimal feedback rule on the trade grid using observed
    prices for the wealth flows.

    Per scenario j and step i:
      q_i = q_{i-1} + nu_{i-1} dt + sigma_inv sqrt(dt) e_i
      x_i = x_{i-1} - nu_{i-1} s_{i-1} dt - sigma_inv s_{i-1} sqrt(dt) e_i
    with nu_{i-1} the feedback rate at (t_{i-1}, q_{i-1}) and s the observed
    trade prices. No spread cost is charged: observed trade prices already
    include the spread crossing.
    """
    dt, sq_dt, rate_coef, branch = _prepare(grid, p, n_sim)
    n_steps = len(dt)
    (eps_inv,) = _scenario_draws(seed, n_sim, n_steps, blocks=1, workers=workers)

    q = np.empty((n_sim, n_steps + 1))
    x = np.empty((n_sim, n_steps + 1))
    q[:, 0] = p.q0
    x[:, 0] = 0.0
    prices = grid.prices
    for i in range(1, n_steps + 1):
        nu = rate_coef[i - 1] * q[:, i - 1]
        shock = p.sigma_inv * sq_dt[i - 1] * eps_inv[:, i - 1]
        q[:, i] = q[:, i - 1] + nu * dt[i - 1] + shock
        x[:, i] = x[:, i - 1] - nu * prices[i - 1] * dt[i - 1] - prices[i - 1] * shock

    return Ensemble(
        times=grid.times.copy(),
        inventory_paths=q,
        wealth_paths=x,
        price_paths=None,
        band_lo=float(band[0]),
        band_hi=float(band[1]),
        seed=int(seed),
        approach=1,
        eta_branch=branch,
    )


def simulate_approach2(
    grid: TradeGrid,
    p: ExecutionParams,
    n_sim: int,
    seed: int = 0,
    band: tuple[float, float] = (5.0, 95.0),
    workers: int = 1,
) -> Ensemble:
    """Replay the feedback rule with a fully simulated impacted price.

    Per scenario j and step i, with independent normal streams e (price) and
    e~ (inventory):
      q_i = q_{i-1} + nu_{i-1} dt + sigma_inv sqrt(dt) e~_i
      s_i = s_{i-1} + alpha_perm nu_{i-1} dt + sigma_price sqrt(dt) e_i
      x_i = x_{i-1} - nu_{i-1} (s_{i-1} + kappa nu_{i-1}) dt
                    - sigma_inv (s_{i-1} + kappa nu_{i-1}) sqrt(dt) e~_i
    starting from the first observed price. Scenarios whose simulated price
    touches zero or below are flagged, never clipped: the arithmetic dynamics
    are allowed to cross zero.
    """
    dt, sq_dt, rate_coef, branch = _prepare(grid, p, n_sim)
    n_steps = len(dt)
    eps_inv, eps_price = _scenario_draws(seed, n_sim, n_steps, blocks=2, workers=workers)

    q = np.empty((n_sim, n_steps + 1))
    s = np.empty((n_sim, n_steps + 1))
    x = np.empty((n_sim, n_steps + 1))
    q[:, 0] = p.q0
    s[:, 0] = grid.prices[0]
    x[:, 0] = 0.0
    for i in range(1, n_steps + 1):
        nu = rate_coef[i - 1] * q[:, i - 1]
        effective_price = s[:, i - 1] + p.kappa_temp * nu
        shock = p.sigma_inv * sq_dt[i - 1] * eps_inv[:, i - 1]
        q[:, i] = q[:, i - 1] + nu * dt[i - 1] + shock
        s[:, i] = (
            s[:, i - 1]
            + p.alpha_perm * nu * dt[i - 1]
            + p.sigma_price * sq_dt[i - 1] * eps_price[:, i - 1]
        )
        x[:, i] = x[:, i - 1] - nu * effective_price * dt[i - 1] - effective_price * shock

    negative = int(np.count_nonzero(np.any(s <= 0.0, axis=1)))
    return Ensemble(
        times=grid.times.copy(),
        inventory_paths=q,
        wealth_paths=x,
        price_paths=s,
        band_lo=float(band[0]),
        band_hi=float(band[1]),
        seed=int(seed),
        approach=2,
        eta_branch=branch,
        negative_price_count=negative,
    )


# ---------------------------------------------------------------------------
# ensemble summaries


@dataclass
class EnsembleSummary:
    times: np.ndarray
    inventory_lo: np.ndarray
    inventory_median: np.ndarray
    inventory_hi: np.ndarray
    wealth_lo: np.ndarray
    wealth_median: np.ndarray
    wealth_hi: np.ndarray
    mean_terminal_wealth: float
    outperformance_pct: float
    band_lo: float
    band_hi: float
    kde_x: np.ndarray
    kde_density: np.ndarray


def gaussian_kde_silverman(
    samples, n_grid: int = 512, pad_bandwidths: float = 6.0
) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian kernel density with Silverman's rule-of-thumb bandwidth,
    evaluated on a grid padded past the sample range. The grid is wide enough
    that the density integrates to 1 up to the far Gaussian tails."""
    samples = as_1d_float_array("samples", samples)
    n = len(samples)
    if n == 0:
        raise ValueError("need at least one sample for a density estimate")
    spread = float(np.std(samples, ddof=1)) if n > 1 else 0.0
    if n > 1:
        q75, q25 = np.percentile(samples, [75.0, 25.0])
        iqr_scale = (q75 - q25) / 1.34
        candidates = [s for s in (spread, iqr_scale) if s > 0]
        scale = min(candidates) if candidates else 0.0
        bandwidth = 0.9 * scale * n ** (-1.0 / 5.0)
    else:
        bandwidth = 0.0
    if bandwidth <= 0:
        # degenerate sample (all equal); give the spike a tiny finite width
        bandwidth = max(1e-12, 1e-9 * (1.0 + abs(float(np.mean(samples)))))

    lo = samples.min() - pad_bandwidths * bandwidth
    hi = samples.max() + pad_bandwidths * bandwidth
    x = np.linspace(lo, hi, n_grid)
    z = (x[:, None] - samples[None, :]) / bandwidth
    density = np.exp(-0.5 * z * z).sum(axis=1) / (n * bandwidth * math.sqrt(2.0 * math.pi))
    return x, density


def ensemble_stats(
    e: Ensemble,
    actual: TradeGrid,
    lo: float | None = None,
    hi: float | None = None,
) -> EnsembleSummary:
    """Percentile bands, mean terminal wealth, outperformance fraction and a
    terminal-wealth density for an ensemble against the realized day.

    Outperformance counts scenarios whose terminal wealth strictly exceeds
    the trader's realized terminal wealth.
    """
    lo = e.band_lo if lo is None else float(lo)
    hi = e.band_hi if hi is None else float(hi)
    if not (0.0 <= lo < hi <= 100.0):
        raise ValueError("percentile band must satisfy 0 <= lo < hi <= 100")

    inv_lo, inv_med, inv_hi = np.percentile(e.inventory_paths, [lo, 50.0, hi], axis=0)
    w_lo, w_med, w_hi = np.percentile(e.wealth_paths, [lo, 50.0, hi], axis=0)
    terminal = e.wealth_paths[:, -1]
    actual_terminal = float(actual.actual_wealth[-1])
    outperformance = 100.0 * float(np.count_nonzero(terminal > actual_terminal)) / e.n_sim
    kde_x, kde_density = gaussian_kde_silverman(terminal)
    return EnsembleSummary(
        times=e.times.copy(),
        inventory_lo=inv_lo,
        inventory_median=inv_med,
        inventory_hi=inv_hi,
        wealth_lo=w_lo,
        wealth_median=w_med,
        wealth_hi=w_hi,
        mean_terminal_wealth=float(np.mean(terminal)),
        outperformance_pct=outperformance,
        band_lo=lo,
        band_hi=hi,
        kde_x=kde_x,
        kde_density=kde_density,
    )


# ---------------------------------------------------------------------------
# grid construction and serialization


def grid_from_records(
    records,
    trader: str,
    q0: float = 0.0,
    x0: float = 0.0,
    wealth_convention: str = PAYMENT_SUM,
) -> TradeGrid:
    """Build the trade-time grid for one trader from sorted tape records,
    aggregating same-timestamp trades into one observation with a
    size-weighted price."""
    events = trader_events(records, trader)
    inventory = q0 + np.cumsum(events.inventory_deltas)
    if wealth_convention == PAYMENT_SUM:
        wealth = x0 + np.cumsum(events.payments)
    else:
        wealth = (x0 - np.cumsum(events.payments)) + inventory * events.prices
    return TradeGrid(
        times=events.times,
        prices=events.prices,
        actual_inventory=inventory,
        actual_wealth=wealth,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def grid_to_csv(grid: TradeGrid, dest) -> None:
    """Write a grid as CSV with columns time,price,inventory,wealth."""
    if hasattr(dest, "write"):
        writer = csv.writer(dest, lineterminator="\n")
        writer.writerow(["time", "price", "inventory", "wealth"])
        for row in zip(grid.times, grid.prices, grid.actual_inventory, grid.actual_wealth):
            writer.writerow([_fmt(v) for v in row])
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            grid_to_csv(grid, fh)


def grid_from_csv(source) -> TradeGrid:
    if hasattr(source, "read"):
        rows = list(csv.DictReader(source))
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError("grid CSV has no rows")
    return TradeGrid(
        times=np.array([float(r["time"]) for r in rows]),
        prices=np.array([float(r["price"]) for r in rows]),
        actual_inventory=np.array([float(r["inventory"]) for r in rows]),
        actual_wealth=np.array([float(r["wealth"]) for r in rows]),
    )
