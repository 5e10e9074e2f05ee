"""Hypothesis tests for a Brownian component in a sampled path.

The null hypothesis is that the observed path has no diffusion part (its
quadratic variation is zero). Because that null is degenerate, the testable
form adds independent Gaussian noise of known variance ``c' = sigma_prime**2``
to every increment, which shifts the null to "quadratic variation equals
c' * T". Large squared-increment sums relative to c' * T then reject the
absence of a Brownian component.

Two samplings are supported:

* regular grids: truncated realized volatility against its quarticity-based
  confidence bound, with the truncation threshold set at ``gamma`` standard
  deviations of one increment;
* asynchronous observation times: time-weighted power variations and their
  central limit theorem, no truncation.

All randomness is drawn from counter-based streams derived from the config
seed, so identical inputs and seed give bitwise-identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import norm

from ._rng import derive_rng
from ._validation import check_choice, check_nonnegative, check_positive, check_unit_open
from .errors import BinLargerThanSession, TooFewObservations, TraderNotFound
from .marketdata import (
    INVENTORY,
    PAYMENT_SUM,
    WEALTH,
    IncrementSeries,
    PathSeries,
    activity_filter,
    async_increments,
    build_trader_paths,
    resample_regular,
)

SAMPLE_VARIANCE = "sample_variance"
BIPOWER = "bipower"
ETA_ESTIMATORS = (SAMPLE_VARIANCE, BIPOWER)

REGULAR = "regular"
ASYNC = "async"


@dataclass(frozen=True)
class RegularTestConfig:
    """Configuration shared by the regular and asynchronous tests.

    ``sigma_prime`` is the standard deviation (per sqrt-second) of the
    injected reference noise, ``gamma`` the truncation multiplier in units of
    one-increment standard deviations, ``alpha_level`` the one-sided test
    size, and ``eta_estimator`` the long-term variance-rate estimator used to
    set the truncation threshold.
    """

    sigma_prime: float
    gamma: float = 3.0
    alpha_level: float = 0.05
    eta_estimator: str = SAMPLE_VARIANCE
    seed: int = 0

    def __post_init__(self):
        check_positive("sigma_prime", self.sigma_prime)
        check_positive("gamma", self.gamma)
        check_unit_open("alpha_level", self.alpha_level)
        check_choice("eta_estimator", self.eta_estimator, ETA_ESTIMATORS)
        if not isinstance(self.seed, (int, np.integer)):
            raise ValueError("seed must be an integer")


@dataclass(frozen=True)
class TestResult:
    """Outcome of one Brownian-component test, with the inputs that set it.

    ``statistic`` is compared one-sided against ``threshold`` (the standard
    normal quantile at 1 - alpha); ``p_value`` is the upper-tail probability.
    ``degenerate`` marks a zero quarticity, reported as a non-reject with
    p-value 1.
    """

    statistic: float
    threshold: float
    p_value: float
    reject_null: bool
    c_hat: float
    quarticity: float
    c_prime_T: float
    n_used: int
    kind: str
    alpha_level: float
    sigma_prime: float
    gamma: float
    eta_estimator: str
    seed: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "threshold": self.threshold,
            "p_value": self.p_value,
            "reject_null": self.reject_null,
            "c_hat": self.c_hat,
            "quarticity": self.quarticity,
            "c_prime_T": self.c_prime_T,
            "n_used": self.n_used,
            "kind": self.kind,
            "alpha_level": self.alpha_level,
            "sigma_prime": self.sigma_prime,
            "gamma": self.gamma,
            "eta_estimator": self.eta_estimator,
            "seed": self.seed,
            "degenerate": self.degenerate,
        }


def normal_abs_moment(r: float) -> float:
    """r-th absolute moment of a standard normal:
    m_r = 2**(r/2) * pi**(-1/2) * Gamma((r+1)/2)."""
    r = check_nonnegative("r", r)
    return 2.0 ** (r / 2.0) / math.sqrt(math.pi) * math.gamma((r + 1.0) / 2.0)


M2 = normal_abs_moment(2.0)
M4 = normal_abs_moment(4.0)


def fictitious_augment(
    incs: IncrementSeries, sigma_prime: float, rng: np.random.Generator
) -> IncrementSeries:
    """Add independent Gaussian noise of per-interval variance
    sigma_prime**2 * interval_length to every increment."""
    check_nonnegative("sigma_prime", sigma_prime)
    eps = rng.standard_normal(len(incs))
    noisy = incs.increments + sigma_prime * np.sqrt(incs.interval_lengths) * eps
    return IncrementSeries(incs.interval_lengths.copy(), noisy, incs.horizon)


def truncation_level(gamma: float, eta: float, delta_n: float) -> float:
    """Threshold gamma * sqrt(eta) * sqrt(delta_n): ``gamma`` standard
    deviations of one increment under variance rate ``eta``."""
    check_positive("gamma", gamma)
    check_nonnegative("eta", eta)
    check_positive("delta_n", delta_n)
    return gamma * math.sqrt(eta) * math.sqrt(delta_n)


def estimate_eta(incs: IncrementSeries, method: str = SAMPLE_VARIANCE) -> float:
    """Estimate the long-term variance rate of a series of increments.

    ``sample_variance`` sums squared increments over the horizon;
    ``bipower`` uses (pi/2) times adjacent absolute products, which is
    robust to isolated jumps.
    """
    check_choice("method", method, ETA_ESTIMATORS)
    if len(incs) < 2:
        raise TooFewObservations("eta estimation needs at least 2 increments")
    x = incs.increments
    if method == SAMPLE_VARIANCE:
        return float(np.sum(x * x) / incs.horizon)
    return float((math.pi / 2.0) * np.sum(np.abs(x[:-1]) * np.abs(x[1:])) / incs.horizon)


def truncated_realized_volatility(
    incs: IncrementSeries, u_n: float
) -> tuple[float, int]:
    """Sum of squared increments with absolute value at most ``u_n``, and the
    count of retained increments."""
    check_nonnegative("u_n", u_n)
    x = incs.increments
    mask = np.abs(x) <= u_n
    return float(np.sum((x * x)[mask])), int(np.count_nonzero(mask))


def truncated_quarticity(incs: IncrementSeries, u_n: float) -> float:
    """Sum of fourth powers of increments with absolute value at most ``u_n``."""
    check_nonnegative("u_n", u_n)
    x = incs.increments
    mask = np.abs(x) <= u_n
    sq = x * x
    return float(np.sum((sq * sq)[mask]))


def power_variation(incs: IncrementSeries, p: float, q: float) -> float:
    """Time-weighted power variation
    sum_i interval_i**(q + 1 - p/2) * |increment_i|**p.

    (p, q) = (2, 0) is the plain quadratic variation estimate; (4, 1) the
    quarticity form. Both have interval exponent zero.
    """
    p = check_nonnegative("p", p)
    q = check_nonnegative("q", q)
    exponent = q + 1.0 - p / 2.0
    weights = incs.interval_lengths**exponent
    return float(np.sum(weights * np.abs(incs.increments) ** p))


def _result(
    cfg: RegularTestConfig,
    kind: str,
    c_hat: float,
    quarticity: float,
    c_prime_T: float,
    n_used: int,
    statistic: float | None,
) -> TestResult:
    threshold = float(norm.ppf(1.0 - cfg.alpha_level))
    if statistic is None:
        # zero quarticity: the normalizer vanishes, report a degenerate
        # non-reject at p-value 1 rather than raising
        return TestResult(
            statistic=float("-inf"),
            threshold=threshold,
            p_value=1.0,
            reject_null=False,
            c_hat=c_hat,
            quarticity=quarticity,
            c_prime_T=c_prime_T,
            n_used=n_used,
            kind=kind,
            alpha_level=cfg.alpha_level,
            sigma_prime=cfg.sigma_prime,
            gamma=cfg.gamma,
            eta_estimator=cfg.eta_estimator,
            seed=cfg.seed,
            degenerate=True,
        )
    p_value = float(norm.sf(statistic))
    return TestResult(
        statistic=float(statistic),
        threshold=threshold,
        p_value=p_value,
        reject_null=bool(statistic > threshold),
        c_hat=c_hat,
        quarticity=quarticity,
        c_prime_T=c_prime_T,
        n_used=n_used,
        kind=kind,
        alpha_level=cfg.alpha_level,
        sigma_prime=cfg.sigma_prime,
        gamma=cfg.gamma,
        eta_estimator=cfg.eta_estimator,
        seed=cfg.seed,
    )


def regular_test(incs: IncrementSeries, cfg: RegularTestConfig) -> TestResult:
    """Brownian-component test on a regular grid.

    Augments the increments with seeded reference noise, truncates at
    ``gamma`` standard deviations (variance rate estimated from the augmented
    series), and compares sqrt(3/2) * (C_hat - c'T) / sqrt(B_hat) one-sided
    against the standard normal quantile.
    """
    if not incs.is_regular():
        raise ValueError("regular_test requires equal interval lengths")
    if len(incs) < 2:
        raise TooFewObservations("regular test needs at least 2 increments")

    rng = derive_rng(cfg.seed, ("fictitious",))
    augmented = fictitious_augment(incs, cfg.sigma_prime, rng)
    eta_hat = estimate_eta(augmented, cfg.eta_estimator)
    delta_n = float(incs.interval_lengths[0])
    u_n = truncation_level(cfg.gamma, eta_hat, delta_n)
    c_hat, n_used = truncated_realized_volatility(augmented, u_n)
    b_hat = truncated_quarticity(augmented, u_n)
    c_prime_T = cfg.sigma_prime**2 * incs.horizon

    if b_hat <= 0.0:
        return _result(cfg, REGULAR, c_hat, b_hat, c_prime_T, n_used, None)
    statistic = math.sqrt(1.5) * (c_hat - c_prime_T) / math.sqrt(b_hat)
    return _result(cfg, REGULAR, c_hat, b_hat, c_prime_T, n_used, statistic)


def async_test(
    incs: IncrementSeries, cfg: RegularTestConfig, truncate: bool = False
) -> TestResult:
    """Brownian-component test on asynchronous observation times.

    Uses the power variations B(2,0) and B(4,1) of the noise-augmented
    increments and the statistic
    sqrt(m4) * (B(2,0) - m2 * c'T) / sqrt((m4 - m2) * B(4,1)),
    one-sided against the standard normal quantile. The equivalent critical
    region is B(2,0) > m2*c'T + z * sqrt(1 - m2/m4) * sqrt(B(4,1)).

    ``truncate`` optionally applies the regular-test truncation to the
    augmented increments before the power variations (off by default: the
    asynchronous theory assumes a continuous path).
    """
    if len(incs) < 2:
        raise TooFewObservations("async test needs at least 2 increments")

    rng = derive_rng(cfg.seed, ("fictitious",))
    augmented = fictitious_augment(incs, cfg.sigma_prime, rng)

    working = augmented
    n_used = len(augmented)
    if truncate:
        eta_hat = estimate_eta(augmented, cfg.eta_estimator)
        delta_bar = float(np.median(augmented.interval_lengths))
        u_n = truncation_level(cfg.gamma, eta_hat, delta_bar)
        mask = np.abs(augmented.increments) <= u_n
        n_used = int(np.count_nonzero(mask))
        if n_used == 0:
            c_prime_T = cfg.sigma_prime**2 * incs.horizon
            return _result(cfg, ASYNC, 0.0, 0.0, c_prime_T, 0, None)
        working = IncrementSeries(
            augmented.interval_lengths[mask],
            augmented.increments[mask],
            augmented.horizon,
        )

    b20 = power_variation(working, 2.0, 0.0)
    b41 = power_variation(working, 4.0, 1.0)
    c_prime_T = cfg.sigma_prime**2 * incs.horizon

    if b41 <= 0.0:
        return _result(cfg, ASYNC, b20, b41, c_prime_T, n_used, None)
    statistic = math.sqrt(M4) * (b20 - M2 * c_prime_T) / math.sqrt((M4 - M2) * b41)
    return _result(cfg, ASYNC, b20, b41, c_prime_T, n_used, statistic)


def sensitivity_sweep(
    path: PathSeries,
    sigma_grid,
    gamma_grid,
    cfg: RegularTestConfig,
    bin_seconds: float = 300.0,
) -> list[tuple[float, float, float]]:
    """Run the regular test over a (sigma_prime, gamma) grid.

    Every grid point reuses the same seed, so the reference-noise draws are
    shared and only rescaled across sigma_prime; p-value curves are smooth in
    sigma_prime as a result. Returns rows (sigma_prime, gamma, p_value).
    """
    sigma_grid = [float(s) for s in sigma_grid]
    gamma_grid = [float(g) for g in gamma_grid]
    if not sigma_grid or not gamma_grid:
        raise ValueError("sigma_grid and gamma_grid must be nonempty")

    incs = resample_regular(path, bin_seconds)
    rows = []
    for sigma in sigma_grid:
        for gamma in gamma_grid:
            result = regular_test(incs, replace(cfg, sigma_prime=sigma, gamma=gamma))
            rows.append((sigma, gamma, result.p_value))
    return rows


# ---------------------------------------------------------------------------
# multi-day batch runner


@dataclass
class BatchCell:
    """Aggregate outcome for one (trader, symbol) over the supplied days."""

    included: int = 0
    rejected: int = 0
    excluded: int = 0
    degenerate: int = 0

    @property
    def rejection_pct(self) -> float | None:
        if self.included == 0:
            return None
        return 100.0 * self.rejected / self.included


@dataclass
class BatchResult:
    traders: list[str]
    symbols: list[str]
    cells: dict  # (trader, symbol) -> BatchCell

    def rejection_pct(self, trader: str, symbol: str) -> float | None:
        return self.cells[(trader, symbol)].rejection_pct

    def table_rows(self) -> list[list]:
        """Rows for a traders-by-symbols CSV; missing cells stay None."""
        rows = []
        for trader in self.traders:
            row: list = [trader]
            for symbol in self.symbols:
                row.append(self.cells[(trader, symbol)].rejection_pct)
            rows.append(row)
        return rows


def _derived_seed(master_seed: int, trader: str, symbol: str, day: str) -> int:
    rng = derive_rng(master_seed, ("cell", str(trader), str(symbol), str(day)))
    return int(rng.integers(0, 2**63 - 1))


def _run_cell_day(
    day_records,
    trader: str,
    cfg: RegularTestConfig,
    mode: str,
    process: str,
    bin_seconds: float,
    min_rate: float,
    wealth_convention: str,
    session_length: float | None,
    cell_seed: int,
):
    """Returns 'excluded', 'degenerate', True (reject) or False (non-reject)."""
    try:
        inventory, wealth = build_trader_paths(
            day_records,
            trader,
            wealth_convention=wealth_convention,
            session_length=session_length,
        )
    except TraderNotFound:
        return "excluded"
    if not activity_filter(inventory, min_rate):
        return "excluded"
    path = inventory if process == INVENTORY else wealth
    try:
        if mode == REGULAR:
            incs = resample_regular(path, bin_seconds)
            result = regular_test(incs, replace(cfg, seed=cell_seed))
        else:
            incs = async_increments(path)
            result = async_test(incs, replace(cfg, seed=cell_seed))
    except (TooFewObservations, BinLargerThanSession):
        return "excluded"
    if result.degenerate:
        return "degenerate"
    return bool(result.reject_null)


def batch_runner(
    tapes,
    traders,
    symbols,
    cfg: RegularTestConfig,
    mode: str = REGULAR,
    process: str = INVENTORY,
    bin_seconds: float = 300.0,
    min_rate: float = 1.0,
    wealth_convention: str = PAYMENT_SUM,
    session_length: float | None = None,
    workers: int = 1,
) -> BatchResult:
    """Percentage of days with a rejected null per (trader, symbol) cell.

    ``tapes`` maps a day key to that day's sorted trade records. Days where
    the trader fails the activity filter (or never trades the symbol) are
    excluded from the denominator and counted separately, as are degenerate
    test outcomes. Cells are evaluated with per-(trader, symbol, day) derived
    seeds, so results do not depend on evaluation order or worker count.
    """
    check_choice("mode", mode, (REGULAR, ASYNC))
    check_choice("process", process, (INVENTORY, WEALTH))
    traders = [str(t) for t in traders]
    symbols = [str(s) for s in symbols]
    days = sorted(tapes)

    jobs = []
    for trader in traders:
        for symbol in symbols:
            for day in days:
                day_records = [r for r in tapes[day] if r.symbol == symbol]
                jobs.append((trader, symbol, day, day_records))

    def run(job):
        trader, symbol, day, day_records = job
        if not day_records:
            return trader, symbol, "excluded"
        outcome = _run_cell_day(
            day_records,
            trader,
            cfg,
            mode,
            process,
            bin_seconds,
            min_rate,
            wealth_convention,
            session_length,
            _derived_seed(cfg.seed, trader, symbol, day),
        )
        return trader, symbol, outcome

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    cells = {(t, s): BatchCell() for t in traders for s in symbols}
    for trader, symbol, outcome in outcomes:
        cell = cells[(trader, symbol)]
        if outcome == "excluded":
            cell.excluded += 1
        elif outcome == "degenerate":
            cell.included += 1
            cell.degenerate += 1
        else:
            cell.included += 1
            if outcome:
                cell.rejected += 1
    return BatchResult(traders=traders, symbols=symbols, cells=cells)
