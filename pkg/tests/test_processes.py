"""Tests for bit-process sampling, reproducibility, and tail bounds."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfastat import (
    Bernoulli,
    Degenerate,
    Dominant,
    MarkovBinary,
    hoeffding_bound,
    incremental_mean,
    parse_process,
    parse_theta,
    sample,
    trial_rng,
)


class TestSpecValidation:
    def test_bernoulli_endpoints_allowed(self):
        assert sample(Bernoulli(0.0), 20, seed=1).sum() == 0
        assert sample(Bernoulli(1.0), 20, seed=1).sum() == 20

    @pytest.mark.parametrize("theta", [-0.1, 1.5])
    def test_bernoulli_rejects_out_of_range(self, theta):
        with pytest.raises(ValueError):
            Bernoulli(theta)

    def test_degenerate_rejects_non_bit(self):
        with pytest.raises(ValueError):
            Degenerate(2)

    @pytest.mark.parametrize("rate", [0.0, 1.5])
    def test_dominant_rejects_bad_switch_rate(self, rate):
        with pytest.raises(ValueError):
            Dominant(1, rate)

    def test_dominant_rejects_non_bit_target(self):
        with pytest.raises(ValueError):
            Dominant(2, 0.5)

    @pytest.mark.parametrize("p01,p10", [(0.0, 0.5), (0.5, 0.0), (1.5, 0.5)])
    def test_markov_rejects_degenerate_rates(self, p01, p10):
        with pytest.raises(ValueError):
            MarkovBinary(p01, p10)


class TestReproducibility:
    def test_bernoulli_first_bits_are_stable(self):
        got = tuple(int(b) for b in sample(Bernoulli(0.5), 16, seed=42, trial=0))
        assert got == (0, 1, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0, 1)

    def test_markov_first_bits_are_stable(self):
        got = tuple(int(b) for b in sample(MarkovBinary(0.2, 0.4), 16, seed=42, trial=0))
        assert got == (0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0)

    def test_dominant_first_bits_are_stable(self):
        got = tuple(int(b) for b in sample(Dominant(1, 0.25), 16, seed=42, trial=0))
        assert got == (1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1)

    def test_same_seed_and_trial_repeat_exactly(self):
        a = sample(Bernoulli(0.3), 1000, seed=7, trial=3)
        b = sample(Bernoulli(0.3), 1000, seed=7, trial=3)
        assert np.array_equal(a, b)

    def test_trials_are_distinct_streams(self):
        a = sample(Bernoulli(0.5), 64, seed=42, trial=0)
        b = sample(Bernoulli(0.5), 64, seed=42, trial=1)
        assert not np.array_equal(a, b)

    def test_seeds_are_distinct_streams(self):
        a = sample(Bernoulli(0.5), 64, seed=1, trial=0)
        b = sample(Bernoulli(0.5), 64, seed=2, trial=0)
        assert not np.array_equal(a, b)

    def test_trial_rng_is_counter_based(self):
        x = trial_rng(9, 4).random(8)
        y = trial_rng(9, 4).random(8)
        assert np.array_equal(x, y)

    def test_empty_sample(self):
        assert sample(Bernoulli(0.5), 0, seed=1).shape == (0,)


class TestBernoulliStatistics:
    @pytest.mark.parametrize("theta", [0.2, 0.5, 0.8])
    def test_mean_near_parameter(self, theta):
        xs = sample(Bernoulli(theta), 10_000, seed=123)
        assert abs(xs.mean() - theta) < 0.05

    def test_every_short_pattern_appears(self):
        # length-8 windows over a million draws cover all 256 patterns
        xs = sample(Bernoulli(0.5), 1_000_000, seed=5)
        windows = np.lib.stride_tricks.sliding_window_view(xs, 8)
        codes = windows @ (1 << np.arange(8))
        assert len(np.unique(codes)) == 256


class TestDegenerate:
    @pytest.mark.parametrize("bit", [0, 1])
    def test_constant_output(self, bit):
        xs = sample(Degenerate(bit), 100, seed=0)
        assert np.all(xs == bit)


class TestDominant:
    def test_tail_is_constant_target(self):
        # noisy prefix has geometric length; after it only the target appears
        for trial in range(50):
            xs = sample(Dominant(1, 0.3), 120, seed=11, trial=trial)
            others = np.flatnonzero(xs == 0)
            if len(others):
                assert np.all(xs[others[-1] + 1 :] == 1)
                assert others[-1] < 119  # 0.7^119 leaves no real mass here

    def test_marginal_converges_to_target(self):
        last = [sample(Dominant(0, 0.3), 64, seed=3, trial=t)[-1] for t in range(300)]
        assert np.mean(last) < 0.01

    def test_early_bits_are_noisy(self):
        first = [sample(Dominant(1, 0.05), 8, seed=8, trial=t)[0] for t in range(2000)]
        # first bit is a fair coin unless the prefix is empty (rate 0.05)
        assert 0.45 < np.mean(first) < 0.62


class TestMarkovBinary:
    def test_stationary_one(self):
        assert MarkovBinary(0.2, 0.4).stationary_one == pytest.approx(1 / 3)

    def test_started_at_stationarity(self):
        # window statistics at offset 0 and offset 50 should agree
        spec = MarkovBinary(0.3, 0.15)
        early = np.empty(4000)
        late = np.empty(4000)
        for t in range(4000):
            xs = sample(spec, 53, seed=21, trial=t)
            early[t] = xs[0]
            late[t] = xs[50]
        assert abs(early.mean() - late.mean()) < 0.04
        assert abs(early.mean() - spec.stationary_one) < 0.04

    def test_transition_frequencies_match_rates(self):
        xs = sample(MarkovBinary(0.25, 0.6), 200_000, seed=17)
        prev, nxt = xs[:-1], xs[1:]
        p01 = nxt[prev == 0].mean()
        p10 = 1 - nxt[prev == 1].mean()
        assert abs(p01 - 0.25) < 0.01
        assert abs(p10 - 0.6) < 0.01


class TestIncrementalMean:
    def test_exact_fraction(self):
        assert incremental_mean([1, 0, 1]) == Fraction(2, 3)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            incremental_mean([])

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
    @settings(max_examples=60, deadline=None)
    def test_matches_direct_sum(self, xs):
        assert incremental_mean(xs) == Fraction(sum(xs), len(xs))


class TestHoeffdingBound:
    def test_known_values(self):
        assert hoeffding_bound(100, 0.1) == pytest.approx(math.exp(-2))
        assert hoeffding_bound(1000, 0.1) == pytest.approx(math.exp(-20))
        assert hoeffding_bound(1000, 0.05) == pytest.approx(math.exp(-5))

    def test_monotone_in_n_and_eps(self):
        assert hoeffding_bound(2000, 0.1) < hoeffding_bound(1000, 0.1)
        assert hoeffding_bound(1000, 0.2) < hoeffding_bound(1000, 0.1)

    def test_rejects_degenerate_arguments(self):
        with pytest.raises(ValueError):
            hoeffding_bound(10, 0.0)
        with pytest.raises(ValueError):
            hoeffding_bound(0, 0.1)

    def test_empirical_deviations_within_budget(self):
        trials, n, eps = 2000, 1000, 0.05
        bound = hoeffding_bound(n, eps)
        bad = 0
        for t in range(trials):
            xs = sample(Bernoulli(0.5), n, seed=99, trial=t)
            if abs(float(xs.mean()) - 0.5) > eps:
                bad += 1
        rate = bad / trials
        se = math.sqrt(max(rate * (1 - rate), 1 / trials) / trials)
        assert rate <= bound + 4 * se


class TestParsers:
    def test_theta_ratio_is_exact(self):
        assert parse_theta("3/4") == Fraction(3, 4)
        assert isinstance(parse_theta("3/4"), Fraction)

    def test_theta_decimal_is_float(self):
        assert parse_theta("0.75") == 0.75
        assert isinstance(parse_theta("0.75"), float)

    @pytest.mark.parametrize("text", ["", "abc", "1/0", "0x3"])
    def test_theta_rejects_junk(self, text):
        with pytest.raises(ValueError):
            parse_theta(text)

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("bernoulli:0.5", Bernoulli),
            ("degenerate:1", Degenerate),
            ("dominant:1:0.1", Dominant),
            ("markov:0.2:0.4", MarkovBinary),
        ],
    )
    def test_process_strings(self, text, expected):
        assert isinstance(parse_process(text), expected)

    @pytest.mark.parametrize("text", ["", "bernoulli", "markov:0.2", "dominant:1", "nope:1"])
    def test_process_rejects_junk(self, text):
        with pytest.raises(ValueError):
            parse_process(text)
