"""Scikit-learn style wrappers around the functional core.

These classes hold the configuration in their constructor (so ``get_params``
/ ``set_params`` / ``clone`` work as usual), consume a path, increment series
or trade grid in ``fit``, and expose the outcome through trailing-underscore
attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import btest, execmodel
from .marketdata import IncrementSeries, PathSeries, async_increments, resample_regular


def _as_increments(X, bin_seconds: float | None) -> IncrementSeries:
    if isinstance(X, IncrementSeries):
        return X
    if isinstance(X, PathSeries):
        if bin_seconds is not None:
            return resample_regular(X, bin_seconds)
        return async_increments(X)
    raise TypeError("X must be an IncrementSeries or a PathSeries")


class RegularBrownianTest(BaseEstimator):
    """Regular-grid Brownian-component test as a fit-style estimator.

    Fit accepts an IncrementSeries from a regular resampling, or a PathSeries
    (resampled at ``bin_seconds`` first). After ``fit`` the outcome lives in
    ``result_``, ``statistic_``, ``p_value_`` and ``reject_``.
    """

    def __init__(
        self,
        sigma_prime: float = 1.0,
        gamma: float = 3.0,
        alpha_level: float = 0.05,
        eta_estimator: str = btest.SAMPLE_VARIANCE,
        seed: int = 0,
        bin_seconds: float | None = 300.0,
    ):
        self.sigma_prime = sigma_prime
        self.gamma = gamma
        self.alpha_level = alpha_level
        self.eta_estimator = eta_estimator
        self.seed = seed
        self.bin_seconds = bin_seconds

    def _config(self) -> btest.RegularTestConfig:
        return btest.RegularTestConfig(
            sigma_prime=self.sigma_prime,
            gamma=self.gamma,
            alpha_level=self.alpha_level,
            eta_estimator=self.eta_estimator,
            seed=self.seed,
        )

    def fit(self, X, y=None):
        if isinstance(X, PathSeries) and self.bin_seconds is None:
            raise ValueError("bin_seconds is required to resample a PathSeries")
        incs = _as_increments(X, self.bin_seconds)
        self.result_ = btest.regular_test(incs, self._config())
        self.statistic_ = self.result_.statistic
        self.p_value_ = self.result_.p_value
        self.reject_ = self.result_.reject_null
        return self

    def predict(self, X=None) -> bool:
        """Reject decision for the fitted data."""
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit before predict")
        return self.reject_


class AsyncBrownianTest(BaseEstimator):
    """Asynchronous-sampling Brownian-component test, fit-style.

    Fit accepts an IncrementSeries or a PathSeries (differenced on its own
    observation times).
    """

    def __init__(
        self,
        sigma_prime: float = 1.0,
        gamma: float = 3.0,
        alpha_level: float = 0.05,
        eta_estimator: str = btest.SAMPLE_VARIANCE,
        seed: int = 0,
        truncate: bool = False,
    ):
        self.sigma_prime = sigma_prime
        self.gamma = gamma
        self.alpha_level = alpha_level
        self.eta_estimator = eta_estimator
        self.seed = seed
        self.truncate = truncate

    def fit(self, X, y=None):
        incs = _as_increments(X, None)
        cfg = btest.RegularTestConfig(
            sigma_prime=self.sigma_prime,
            gamma=self.gamma,
            alpha_level=self.alpha_level,
            eta_estimator=self.eta_estimator,
            seed=self.seed,
        )
        self.result_ = btest.async_test(incs, cfg, truncate=self.truncate)
        self.statistic_ = self.result_.statistic
        self.p_value_ = self.result_.p_value
        self.reject_ = self.result_.reject_null
        return self

    def predict(self, X=None) -> bool:
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit before predict")
        return self.reject_


class OptimalExecutionSimulator(BaseEstimator):
    """Monte Carlo benchmark of the optimal feedback rule, fit-style.

    ``fit`` takes a TradeGrid; ``horizon`` defaults to the last grid time.
    After fitting, ``ensemble_`` holds the scenario paths and ``summary_``
    the percentile bands, mean terminal wealth, outperformance percentage
    and terminal-wealth density.
    """

    def __init__(
        self,
        kappa_temp: float = 1.0,
        alpha_perm: float = 0.0,
        sigma_price: float = 0.0,
        sigma_inv: float = 0.0,
        terminal_penalty: float = 0.03,
        running_penalty: float = 9.9e-7,
        q0: float = 0.0,
        horizon: float | None = None,
        approach: int = 1,
        n_sim: int = 1000,
        seed: int = 0,
        band_lo: float = 5.0,
        band_hi: float = 95.0,
    ):
        self.kappa_temp = kappa_temp
        self.alpha_perm = alpha_perm
        self.sigma_price = sigma_price
        self.sigma_inv = sigma_inv
        self.terminal_penalty = terminal_penalty
        self.running_penalty = running_penalty
        self.q0 = q0
        self.horizon = horizon
        self.approach = approach
        self.n_sim = n_sim
        self.seed = seed
        self.band_lo = band_lo
        self.band_hi = band_hi

    def _params(self, grid: execmodel.TradeGrid) -> execmodel.ExecutionParams:
        horizon = self.horizon if self.horizon is not None else float(grid.times[-1])
        return execmodel.ExecutionParams(
            kappa_temp=self.kappa_temp,
            horizon=horizon,
            alpha_perm=self.alpha_perm,
            sigma_price=self.sigma_price,
            sigma_inv=self.sigma_inv,
            terminal_penalty=self.terminal_penalty,
            running_penalty=self.running_penalty,
            q0=self.q0,
        )

    def fit(self, X, y=None):
        if not isinstance(X, execmodel.TradeGrid):
            raise TypeError("X must be a TradeGrid")
        if self.approach not in (1, 2):
            raise ValueError("approach must be 1 or 2")
        params = self._params(X)
        simulate = (
            execmodel.simulate_approach1
            if self.approach == 1
            else execmodel.simulate_approach2
        )
        self.params_ = params
        self.ensemble_ = simulate(
            X,
            params,
            n_sim=self.n_sim,
            seed=self.seed,
            band=(self.band_lo, self.band_hi),
        )
        self.summary_ = execmodel.ensemble_stats(self.ensemble_, X)
        return self

    def predict(self, X=None) -> np.ndarray:
        """Median simulated wealth path of the fitted ensemble."""
        if not hasattr(self, "summary_"):
            raise NotFittedError("call fit before predict")
        return self.summary_.wealth_median
