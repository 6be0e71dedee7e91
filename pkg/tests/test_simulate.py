"""Tests for the Monte Carlo harness: configs, determinism, cross-checks."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from apdgof import apd
from apdgof.errors import ConfigError
from apdgof.score import LocationScale, fisher_blocks
from apdgof.simulate import (
    StudyConfig,
    ks_distance,
    mc_fisher_check,
    mle_rmse_study,
    quadrature_fisher,
    replicate_rng,
    run_local_alternative_study,
    run_null_study,
)


class TestStudyConfig:
    def test_valid(self):
        cfg = StudyConfig(lam=1.0, n=100, reps=100, seed=0, alpha_grid=(0.01, 0.05))
        assert cfg.alpha_grid == (0.01, 0.05)
        assert cfg.delta is None

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(lam=0.5, n=100, reps=100, seed=0),
            dict(lam=1.0, n=9, reps=100, seed=0),
            dict(lam=1.0, n=100, reps=99, seed=0),
            dict(lam=1.0, n=100, reps=100, seed=-1),
            dict(lam=1.0, n=100, reps=100, seed=2**64),
            dict(lam=1.0, n=100, reps=100, seed=0, alpha_grid=()),
            dict(lam=1.0, n=100, reps=100, seed=0, alpha_grid=(0.05, 0.05)),
            dict(lam=1.0, n=100, reps=100, seed=0, alpha_grid=(0.0,)),
            dict(lam=1.0, n=100, reps=100, seed=0, alpha_grid=(1.5,)),
            dict(lam=1.0, n=100, reps=100, seed=0, delta=(1.0,)),
            dict(lam=1.0, n=100, reps=100, seed=0, delta=(math.nan, 0.0)),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            StudyConfig(**kwargs)

    def test_shifted_shape_leaving_space(self):
        # theta1 drift of -6/sqrt(100) pushes the asymmetry below 0
        cfg = StudyConfig(lam=1.0, n=100, reps=100, seed=0, delta=(-6.0, 0.0))
        with pytest.raises(ConfigError):
            cfg.shifted_shape()

    def test_shifted_shape_value(self):
        cfg = StudyConfig(lam=2.0, n=400, reps=100, seed=0, delta=(0.5, 0.3))
        t1, t2 = cfg.shifted_shape()
        assert_allclose((t1, t2), (0.5 + 0.025, 2.0 + 0.015), rtol=0, atol=1e-15)


class TestReplicateRng:
    def test_pure_function_of_seed_and_index(self):
        a = replicate_rng(5, 7).random(4)
        b = replicate_rng(5, 7).random(4)
        assert np.array_equal(a, b)

    def test_distinct_indices_give_distinct_streams(self):
        a = replicate_rng(5, 0).random(4)
        b = replicate_rng(5, 1).random(4)
        assert not np.array_equal(a, b)


class TestKsDistance:
    def test_hand_example(self):
        # sample {0.1, 0.5} against the uniform CDF:
        # gaps are max(0.5-0.1, 0.1-0) = 0.4 and max(1-0.5, 0.5-0.5) = 0.5
        assert ks_distance([0.1, 0.5], lambda x: x) == pytest.approx(0.5)

    def test_perfect_fit_quantiles(self):
        u = (np.arange(100) + 0.5) / 100
        assert ks_distance(u, lambda x: x) == pytest.approx(0.005)

    def test_empty(self):
        with pytest.raises(ConfigError):
            ks_distance([], lambda x: x)


class TestNullStudy:
    CFG = StudyConfig(lam=2.0, n=400, reps=600, seed=42, alpha_grid=(0.05, 0.2))

    def test_rate_near_level(self):
        report = run_null_study(self.CFG)
        assert report.kind == "size"
        assert report.replicate_failures == 0
        by_alpha = {r.alpha: r for r in report.rejections}
        assert abs(by_alpha[0.05].rate - 0.05) < 0.035
        assert abs(by_alpha[0.2].rate - 0.2) < 0.06
        assert by_alpha[0.05].predicted is None

    def test_p_values_uniform(self):
        # the KS distance of T against chi-square(2) equals the KS distance
        # of the p-values against the uniform law; both must be small
        report = run_null_study(self.CFG)
        assert report.ks_stat < 1.63 / math.sqrt(self.CFG.reps)

    def test_rerun_identical(self):
        a = run_null_study(self.CFG)
        b = run_null_study(self.CFG)
        assert a.to_json() == b.to_json()

    def test_worker_count_invariance(self):
        a = run_null_study(self.CFG)
        b = run_null_study(self.CFG, workers=3)
        assert a.to_json() == b.to_json()

    def test_delta_rejected(self):
        cfg = StudyConfig(lam=2.0, n=100, reps=100, seed=0, delta=(0.1, 0.1))
        with pytest.raises(ConfigError):
            run_null_study(cfg)

    def test_report_round_trip(self):
        import json

        report = run_null_study(
            StudyConfig(lam=1.0, n=50, reps=100, seed=3)
        )
        text = report.to_json()
        assert json.dumps(json.loads(text), sort_keys=True, indent=2) == text


class TestLocalAlternativeStudy:
    def test_requires_delta(self):
        cfg = StudyConfig(lam=2.0, n=100, reps=100, seed=0)
        with pytest.raises(ConfigError):
            run_local_alternative_study(cfg)

    def test_zero_delta_degenerates_to_null(self):
        base = dict(lam=2.0, n=200, reps=200, seed=9, alpha_grid=(0.05,))
        null_report = run_null_study(StudyConfig(**base))
        alt_report = run_local_alternative_study(StudyConfig(delta=(0.0, 0.0), **base))
        assert alt_report.rejections[0].rate == null_report.rejections[0].rate
        assert alt_report.ks_stat == null_report.ks_stat
        assert alt_report.rejections[0].predicted == pytest.approx(0.05, abs=1e-12)

    def test_prediction_columns_present(self):
        cfg = StudyConfig(lam=2.0, n=400, reps=200, seed=1, delta=(0.8, 0.4))
        report = run_local_alternative_study(cfg)
        assert report.kind == "power"
        r = report.rejections[0]
        assert r.predicted is not None and r.predicted > 0.05
        assert 0.0 <= r.rate <= 1.0

    def test_power_grows_with_direction_norm(self):
        base = dict(lam=2.0, n=400, reps=300, seed=4, alpha_grid=(0.05,))
        small = run_local_alternative_study(StudyConfig(delta=(0.5, 0.3), **base))
        large = run_local_alternative_study(StudyConfig(delta=(1.5, 0.9), **base))
        assert large.rejections[0].rate >= small.rejections[0].rate


class TestMcFisherCheck:
    def test_requires_enough_draws(self):
        with pytest.raises(ConfigError):
            mc_fisher_check(1.0, 10**4, seed=0)

    @pytest.mark.parametrize("lam", [1.0, 2.0])
    def test_within_four_standard_errors(self, lam):
        check = mc_fisher_check(lam, 2 * 10**5, seed=23)
        ref = fisher_blocks(lam).full
        gap = np.abs(check.estimate - ref)
        assert np.all(gap <= 4.0 * check.std_error)

    def test_zero_pattern_entries_small(self):
        check = mc_fisher_check(1.5, 2 * 10**5, seed=29)
        for a, b in [(0, 1), (0, 3), (1, 2), (2, 3)]:
            assert abs(check.estimate[a, b]) <= 4.0 * check.std_error[a, b]


class TestQuadratureFisher:
    @pytest.mark.parametrize("lam", [1.0, 2.5])
    def test_matches_closed_form(self, lam):
        qf = quadrature_fisher(lam)
        assert_allclose(qf, fisher_blocks(lam).full, rtol=0, atol=1e-6)

    def test_zero_entries_tiny(self):
        qf = quadrature_fisher(2.0)
        for a, b in [(0, 1), (0, 3), (1, 2), (2, 3)]:
            assert abs(qf[a, b]) < 1e-8


class TestMleRmseStudy:
    def test_deterministic(self):
        a = mle_rmse_study(2.0, 100, 100, seed=17)
        b = mle_rmse_study(2.0, 100, 100, seed=17)
        assert a == b

    def test_shrinks_with_n(self):
        small = mle_rmse_study(2.0, 100, 200, seed=17)
        large = mle_rmse_study(2.0, 1600, 200, seed=19)
        assert large[0] < small[0]
        assert large[1] < small[1]


class TestFailureCounting:
    def test_degenerate_replicate_is_counted(self, monkeypatch):
        real_sample = apd.sample
        calls = {"i": 0}

        def flaky_sample(params, n, rng):
            calls["i"] += 1
            if calls["i"] == 3:
                return np.zeros(n)
            return real_sample(params, n, rng)

        monkeypatch.setattr("apdgof.simulate.apd.sample", flaky_sample)
        cfg = StudyConfig(lam=2.0, n=50, reps=100, seed=2)
        report = run_null_study(cfg)
        assert report.replicate_failures == 1
        total = report.config.reps - report.replicate_failures
        assert total == 99
