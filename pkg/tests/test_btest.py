"""Unit tests for the test statistics and their building blocks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm

from tradepath import btest
from tradepath._rng import derive_rng
from tradepath.btest import (
    RegularTestConfig,
    async_test,
    estimate_eta,
    fictitious_augment,
    normal_abs_moment,
    power_variation,
    regular_test,
    truncated_quarticity,
    truncated_realized_volatility,
    truncation_level,
)
from tradepath.errors import TooFewObservations
from tradepath.marketdata import IncrementSeries


def incs_of(increments, intervals=None, horizon=None):
    increments = np.asarray(increments, dtype=float)
    if intervals is None:
        intervals = np.ones_like(increments)
    intervals = np.asarray(intervals, dtype=float)
    if horizon is None:
        horizon = float(np.sum(intervals))
    return IncrementSeries(intervals, increments, horizon)


class TestNormalAbsMoment:
    def test_exact_integer_moments(self):
        assert normal_abs_moment(2.0) == pytest.approx(1.0, abs=1e-12)
        assert normal_abs_moment(4.0) == pytest.approx(3.0, abs=1e-12)
        assert normal_abs_moment(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_first_moment_closed_form(self):
        assert normal_abs_moment(1.0) == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-12)

    def test_first_moment_monte_carlo(self):
        # independent oracle: sample mean of |N(0,1)| over 1e7 draws
        draws = np.random.default_rng(42).standard_normal(10_000_000)
        assert normal_abs_moment(1.0) == pytest.approx(np.mean(np.abs(draws)), abs=1e-3)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            normal_abs_moment(-0.5)


class TestFictitiousAugment:
    def test_zero_scale_is_identity(self):
        incs = incs_of([1.0, -2.0, 3.0])
        out = fictitious_augment(incs, 0.0, np.random.default_rng(0))
        assert np.array_equal(out.increments, incs.increments)
        assert np.array_equal(out.interval_lengths, incs.interval_lengths)

    def test_fixed_seed_reproducible(self):
        incs = incs_of(np.zeros(100))
        a = fictitious_augment(incs, 2.0, derive_rng(7, ("fictitious",)))
        b = fictitious_augment(incs, 2.0, derive_rng(7, ("fictitious",)))
        assert np.array_equal(a.increments, b.increments)

    def test_variance_matches_scale(self):
        # zero inputs, 1e5 unit intervals, scale 2 -> sample variance near 4
        incs = incs_of(np.zeros(100_000))
        out = fictitious_augment(incs, 2.0, np.random.default_rng(3))
        assert 3.9 <= np.var(out.increments) <= 4.1

    def test_interval_scaling(self):
        incs = incs_of(np.zeros(200_000), intervals=np.full(200_000, 0.25))
        out = fictitious_augment(incs, 2.0, np.random.default_rng(4))
        assert np.var(out.increments) == pytest.approx(4.0 * 0.25, rel=0.05)


class TestTruncationLevel:
    def test_direct_substitution(self):
        assert truncation_level(3.0, 4.0, 1.0) == 6.0

    def test_degenerate_eta(self):
        assert truncation_level(3.0, 0.0, 10.0) == 0.0

    def test_calculator_value(self):
        # 3 * sqrt(2.5 * 300) = 3 * sqrt(750)
        assert truncation_level(3.0, 2.5, 300.0) == pytest.approx(
            3.0 * math.sqrt(750.0), rel=1e-12
        )


class TestEstimateEta:
    def test_all_zero(self):
        assert estimate_eta(incs_of(np.zeros(10))) == 0.0

    def test_unit_increments(self):
        incs = incs_of(np.ones(100), horizon=100.0)
        assert estimate_eta(incs, "sample_variance") == 1.0

    def test_brownian_recovery_both_methods(self):
        rng = np.random.default_rng(11)
        n = 100_000
        incs = incs_of(
            2.0 * math.sqrt(1.0 / n) * rng.standard_normal(n),
            intervals=np.full(n, 1.0 / n),
            horizon=1.0,
        )
        assert 3.8 <= estimate_eta(incs, "sample_variance") <= 4.2
        assert 3.8 <= estimate_eta(incs, "bipower") <= 4.2

    def test_too_few(self):
        with pytest.raises(TooFewObservations):
            estimate_eta(incs_of([1.0]))


class TestTruncatedSums:
    def test_realized_volatility_hand_sum(self):
        c_hat, n_used = truncated_realized_volatility(incs_of([1.0, 2.0, 10.0]), 3.0)
        assert c_hat == 5.0 and n_used == 2

    def test_zero_threshold(self):
        c_hat, n_used = truncated_realized_volatility(incs_of([1.0, 2.0, 10.0]), 0.0)
        assert c_hat == 0.0 and n_used == 0

    def test_infinite_threshold_is_plain_rv(self):
        incs = incs_of([1.0, -2.0, 10.0])
        c_hat, n_used = truncated_realized_volatility(incs, np.inf)
        assert c_hat == 105.0 and n_used == 3

    def test_quarticity_hand_sum(self):
        assert truncated_quarticity(incs_of([1.0, 2.0, 10.0]), 3.0) == 17.0

    def test_quarticity_zero_increments(self):
        assert truncated_quarticity(incs_of(np.zeros(5)), 1.0) == 0.0

    def test_quarticity_consistency_constant_vol(self):
        # combined variance rate 5 over T=1: B_hat / delta -> 3 * 25 within 5%
        rng = np.random.default_rng(5)
        n = 100_000
        delta = 1.0 / n
        raw = math.sqrt(5.0 * delta) * rng.standard_normal(n)
        incs = incs_of(raw, intervals=np.full(n, delta), horizon=1.0)
        b_hat = truncated_quarticity(incs, np.inf)
        assert b_hat / delta == pytest.approx(3.0 * 25.0, rel=0.05)


class TestPowerVariation:
    def test_quadratic_form(self):
        assert power_variation(incs_of([3.0, -2.0], [1.0, 2.0]), 2.0, 0.0) == 13.0

    def test_quartic_form(self):
        assert power_variation(incs_of([3.0, -2.0], [1.0, 2.0]), 4.0, 1.0) == 97.0

    def test_zero_increments(self):
        assert power_variation(incs_of(np.zeros(4)), 3.0, 1.0) == 0.0

    def test_interval_weighting(self):
        # (p, q) = (2, 1): exponent 1, weights are the interval lengths
        incs = incs_of([1.0, 1.0], [2.0, 4.0])
        assert power_variation(incs, 2.0, 1.0) == 6.0

    def test_matches_untruncated_rv_bitwise(self):
        rng = np.random.default_rng(8)
        incs = incs_of(rng.standard_normal(500), np.full(500, 0.3))
        c_hat, _ = truncated_realized_volatility(incs, np.inf)
        assert power_variation(incs, 2.0, 0.0) == c_hat


class TestRegularTest:
    def cfg(self, **kw):
        base = dict(sigma_prime=1.0, gamma=3.0, alpha_level=0.05, seed=0)
        base.update(kw)
        return RegularTestConfig(**base)

    def test_requires_regular_grid(self):
        incs = incs_of([1.0, 2.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            regular_test(incs, self.cfg())

    def test_centering_gives_half_p_value(self):
        # solve for the noise scale where C_hat crosses c'T: at the crossing
        # the statistic is 0 and the p-value 1/2
        from scipy.optimize import brentq

        n = 100
        raw = 2.0 * np.random.default_rng(14).standard_normal(n)
        incs = incs_of(raw, horizon=float(n))

        def statistic(sigma_prime):
            return regular_test(incs, self.cfg(sigma_prime=sigma_prime, gamma=6.0, seed=7)).statistic

        root = brentq(statistic, 0.5, 200.0, xtol=1e-13, rtol=8.9e-16)
        result = regular_test(incs, self.cfg(sigma_prime=root, gamma=6.0, seed=7))
        assert result.statistic == pytest.approx(0.0, abs=1e-12)
        assert result.p_value == pytest.approx(0.5, abs=1e-12)

    def test_degenerate_quarticity_flagged(self):
        # all increments identical and far above the truncation level
        incs = incs_of(np.full(16, 100.0), horizon=16.0)
        cfg = self.cfg(sigma_prime=1e-12, gamma=1e-9)
        result = regular_test(incs, cfg)
        assert result.degenerate and not result.reject_null
        assert result.p_value == 1.0
        assert result.statistic == float("-inf")

    def test_determinism_bitwise(self):
        incs = incs_of(np.random.default_rng(1).standard_normal(64))
        a = regular_test(incs, self.cfg(seed=99))
        b = regular_test(incs, self.cfg(seed=99))
        assert a == b

    def test_different_seeds_differ(self):
        incs = incs_of(np.random.default_rng(1).standard_normal(64))
        a = regular_test(incs, self.cfg(seed=1))
        b = regular_test(incs, self.cfg(seed=2))
        assert a.statistic != b.statistic

    def test_critical_region_equivalence(self):
        # statistic form and region form agree:
        # sqrt(3/2) (C - c'T)/sqrt(B) > z  <=>  C > c'T + (z/sqrt(3)) sqrt(2B)
        rng = np.random.default_rng(17)
        for _ in range(50):
            incs = incs_of(rng.standard_normal(40) * rng.uniform(0.5, 20.0))
            cfg = self.cfg(
                sigma_prime=rng.uniform(0.1, 5.0),
                gamma=rng.uniform(2.0, 6.0),
                alpha_level=rng.uniform(0.01, 0.2),
                seed=int(rng.integers(1 << 30)),
            )
            r = regular_test(incs, cfg)
            if r.degenerate:
                continue
            z = norm.ppf(1.0 - cfg.alpha_level)
            region = r.c_hat > r.c_prime_T + (z / math.sqrt(3.0)) * math.sqrt(
                2.0 * r.quarticity
            )
            assert region == r.reject_null

    def test_jump_is_truncated_exactly(self):
        # a jump far above the threshold contributes exactly nothing
        incs = incs_of([0.5, -0.25, 0.75, 0.0], horizon=4.0)
        u_n = 1.0
        base, n_base = truncated_realized_volatility(incs, u_n)
        jumped = incs_of([0.5, -0.25, 0.75, 0.0, 100.0 * u_n], horizon=5.0)
        with_jump, n_jump = truncated_realized_volatility(jumped, u_n)
        assert with_jump == base
        assert n_jump == n_base


class TestAsyncTest:
    def cfg(self, **kw):
        base = dict(sigma_prime=1.0, gamma=3.0, alpha_level=0.05, seed=0)
        base.update(kw)
        return RegularTestConfig(**base)

    def test_moment_constants_in_statistic(self):
        # with m2 = 1 and m4 = 3 the statistic is
        # sqrt(3) (B(2,0) - c'T) / sqrt(2 B(4,1))
        incs = incs_of(np.random.default_rng(2).standard_normal(200))
        r = async_test(incs, self.cfg(seed=5))
        rng = derive_rng(5, ("fictitious",))
        aug = fictitious_augment(incs, 1.0, rng)
        b20 = power_variation(aug, 2.0, 0.0)
        b41 = power_variation(aug, 4.0, 1.0)
        expected = math.sqrt(3.0) * (b20 - r.c_prime_T) / math.sqrt(2.0 * b41)
        assert r.statistic == pytest.approx(expected, rel=1e-12)

    def test_critical_region_equivalence(self):
        # reject  <=>  B(2,0) > m2 c'T + z sqrt(1 - m2/m4) sqrt(B(4,1))
        rng = np.random.default_rng(18)
        for _ in range(50):
            n = int(rng.integers(10, 200))
            incs = incs_of(
                rng.standard_normal(n) * rng.uniform(0.5, 10.0),
                intervals=rng.uniform(0.5, 2.0, n),
            )
            cfg = self.cfg(
                sigma_prime=rng.uniform(0.1, 5.0),
                alpha_level=rng.uniform(0.01, 0.2),
                seed=int(rng.integers(1 << 30)),
            )
            r = async_test(incs, cfg)
            z = norm.ppf(1.0 - cfg.alpha_level)
            region = r.c_hat > 1.0 * r.c_prime_T + z * math.sqrt(
                1.0 - 1.0 / 3.0
            ) * math.sqrt(r.quarticity)
            assert region == r.reject_null

    def test_degenerate(self):
        incs = incs_of(np.zeros(8))
        r = async_test(incs, self.cfg(sigma_prime=1e-300))
        assert r.degenerate and r.p_value == 1.0

    def test_truncate_flag_drops_jump(self):
        rng = np.random.default_rng(9)
        base_inc = rng.standard_normal(400)
        jumped = base_inc.copy()
        jumped[200] = 1e6
        incs = incs_of(jumped)
        robust = async_test(incs, self.cfg(seed=4), truncate=True)
        plain = async_test(incs, self.cfg(seed=4), truncate=False)
        assert robust.n_used == 399
        assert plain.n_used == 400
        assert robust.c_hat < plain.c_hat

    def test_too_few(self):
        with pytest.raises(TooFewObservations):
            async_test(incs_of([1.0]), self.cfg())


# ---------------------------------------------------------------------------
# result invariants

configs = st.builds(
    RegularTestConfig,
    sigma_prime=st.floats(min_value=0.05, max_value=50.0),
    gamma=st.floats(min_value=1.0, max_value=10.0),
    alpha_level=st.floats(min_value=0.005, max_value=0.3),
    eta_estimator=st.sampled_from(list(btest.ETA_ESTIMATORS)),
    seed=st.integers(min_value=0, max_value=2**31),
)


@given(configs, st.integers(min_value=0, max_value=2**31), st.booleans())
@settings(max_examples=80, deadline=None)
def test_three_way_consistency(cfg, data_seed, use_async):
    rng = np.random.default_rng(data_seed)
    n = 50
    incs = incs_of(rng.standard_normal(n) * 3.0, horizon=float(n))
    result = async_test(incs, cfg) if use_async else regular_test(incs, cfg)
    z = norm.ppf(1.0 - cfg.alpha_level)
    assert result.reject_null == (result.statistic > z)
    assert result.reject_null == (result.p_value < cfg.alpha_level)
    if not result.degenerate:
        assert result.p_value == pytest.approx(float(norm.sf(result.statistic)), abs=0)


def test_config_validation():
    with pytest.raises(ValueError):
        RegularTestConfig(sigma_prime=0.0)
    with pytest.raises(ValueError):
        RegularTestConfig(sigma_prime=1.0, alpha_level=1.0)
    with pytest.raises(ValueError):
        RegularTestConfig(sigma_prime=1.0, gamma=-1.0)
    with pytest.raises(ValueError):
        RegularTestConfig(sigma_prime=1.0, eta_estimator="nope")
