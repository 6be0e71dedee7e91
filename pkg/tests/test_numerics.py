"""Tests for the special-function and probability-kernel layer.

High-precision reference values come from mpmath at 50 digits; the
noncentral chi-square survival function is additionally checked against
scipy's independent implementation and a direct Monte Carlo simulation.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special as sc
from scipy import stats

from apdgof import numerics
from apdgof.errors import AccuracyError, DomainError
from apdgof.numerics import (
    QuadratureSpec,
    chi2_quantile,
    chi2_sf,
    digamma,
    gamma_sample,
    integrate,
    log_gamma,
    noncentral_chi2_sf,
    reg_lower_inc_gamma,
    trigamma,
)

mp.mp.dps = 50

RECURRENCE_POINTS = [0.1, 0.5, 1.0, 3.7, 10.0]


class TestLogGamma:
    def test_exact_integers(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(2.0) == 0.0

    def test_half_integer(self):
        # log(sqrt(pi)/2), 50-digit reference
        assert_allclose(log_gamma(1.5), -0.12078223763524522, rtol=0, atol=1e-15)

    @pytest.mark.parametrize("x", [1e-3, 0.02, 0.7, 1.0, 4.5, 123.0, 1e4, 1e6])
    def test_against_mpmath(self, x):
        ref = float(mp.loggamma(mp.mpf(x)))
        assert_allclose(log_gamma(x), ref, rtol=1e-13, atol=1e-300)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestDigammaTrigamma:
    def test_euler_mascheroni(self):
        assert_allclose(digamma(1.0), -0.5772156649015329, rtol=0, atol=1e-14)

    def test_half_integer(self):
        assert_allclose(digamma(1.5), 0.03648997397857652, rtol=0, atol=1e-14)
        assert_allclose(trigamma(1.0), math.pi**2 / 6, rtol=0, atol=1e-12)
        assert_allclose(trigamma(1.5), math.pi**2 / 2 - 4, rtol=0, atol=1e-12)

    def test_digamma_shift(self):
        assert_allclose(digamma(2.0), digamma(1.0) + 1.0, rtol=0, atol=1e-13)
        assert_allclose(trigamma(2.0), trigamma(1.0) - 1.0, rtol=0, atol=1e-13)

    @pytest.mark.parametrize("x", RECURRENCE_POINTS)
    def test_recurrences(self, x):
        assert_allclose(digamma(x + 1) - digamma(x), 1 / x, rtol=0, atol=1e-12)
        assert_allclose(trigamma(x + 1) - trigamma(x), -1 / x**2, rtol=0, atol=1e-12)
        assert_allclose(
            log_gamma(x + 1) - log_gamma(x), math.log(x), rtol=0, atol=1e-12
        )

    @pytest.mark.parametrize("x", [1e-3, 0.4, 2.0, 77.0, 1e6])
    def test_against_mpmath(self, x):
        assert_allclose(digamma(x), float(mp.digamma(mp.mpf(x))), rtol=0, atol=1e-12)
        assert_allclose(
            trigamma(x), float(mp.polygamma(1, mp.mpf(x))), rtol=1e-12, atol=1e-12
        )

    @pytest.mark.parametrize("fn", [digamma, trigamma])
    def test_domain(self, fn):
        with pytest.raises(DomainError):
            fn(0.0)
        with pytest.raises(DomainError):
            fn(-2.5)


class TestRegLowerIncGamma:
    def test_at_zero(self):
        assert reg_lower_inc_gamma(3.2, 0.0) == 0.0

    @pytest.mark.parametrize("x", [0.1, 1.0, 4.0])
    def test_exponential_case(self, x):
        assert_allclose(reg_lower_inc_gamma(1.0, x), -math.expm1(-x), rtol=0, atol=1e-14)

    def test_erf_identity(self):
        assert_allclose(
            reg_lower_inc_gamma(0.5, 1.0), 0.8427007929497149, rtol=0, atol=1e-13
        )

    def test_monotone_in_x(self):
        x = np.linspace(0, 30, 200)
        vals = [reg_lower_inc_gamma(2.7, xi) for xi in x]
        assert np.all(np.diff(vals) >= 0)
        assert all(0.0 <= v <= 1.0 for v in vals)

    def test_domain(self):
        with pytest.raises(DomainError):
            reg_lower_inc_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            reg_lower_inc_gamma(1.0, -0.1)


class TestChi2:
    def test_sf_at_zero(self):
        assert chi2_sf(0.0, 2) == 1.0

    def test_sf_closed_form_two_dof(self):
        x = np.linspace(0.0, 50.0, 501)
        for xi in x:
            assert_allclose(chi2_sf(xi, 2), math.exp(-xi / 2), rtol=0, atol=1e-14)

    def test_sf_level_point(self):
        assert_allclose(chi2_sf(2 * math.log(20), 2), 0.05, rtol=0, atol=1e-15)

    def test_quantile_closed_forms(self):
        assert_allclose(chi2_quantile(0.95, 2), 5.991464547107982, rtol=0, atol=1e-12)
        assert_allclose(chi2_quantile(0.5, 2), 2 * math.log(2), rtol=0, atol=1e-14)
        assert_allclose(chi2_quantile(0.99, 2), 9.210340371976184, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 5, 10])
    @pytest.mark.parametrize("p", [0.01, 0.5, 0.95, 0.999])
    def test_quantile_round_trip(self, k, p):
        q = chi2_quantile(p, k)
        assert_allclose(chi2_sf(q, k), 1 - p, rtol=0, atol=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            chi2_sf(-1.0, 2)
        with pytest.raises(DomainError):
            chi2_sf(1.0, 0)
        for p in (0.0, 1.0, -0.3, math.nan):
            with pytest.raises(DomainError):
                chi2_quantile(p, 2)


class TestNoncentralChi2:
    def test_reduces_to_central(self):
        for x in (0.0, 1.3, 7.7):
            assert noncentral_chi2_sf(x, 2, 0.0) == chi2_sf(x, 2)

    def test_at_zero(self):
        assert noncentral_chi2_sf(0.0, 2, 4.0) == 1.0

    def test_reference_value(self):
        # Independent references for sf(5.9914645..., df=2, ncp=4): scipy's
        # implementation and the Monte Carlo check below both give 0.41543.
        val = noncentral_chi2_sf(5.991464547107982, 2, 4.0)
        assert_allclose(val, 0.4154267925299622, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("k", [1, 2, 4])
    @pytest.mark.parametrize("ncp", [0.3, 2.0, 9.0, 40.0])
    def test_against_scipy(self, k, ncp):
        for x in (0.5, 3.0, 12.0, 30.0):
            assert_allclose(
                noncentral_chi2_sf(x, k, ncp),
                stats.ncx2.sf(x, k, ncp),
                rtol=1e-9,
                atol=1e-12,
            )

    def test_against_monte_carlo(self):
        # (Z1 + 2)^2 + Z2^2 is noncentral chi-square with df=2, ncp=4.
        crit = 5.991464547107982
        rng = np.random.default_rng(20260810)
        n = 10**7
        hits = 0
        for _ in range(10):
            z1 = rng.standard_normal(n // 10) + 2.0
            z2 = rng.standard_normal(n // 10)
            hits += int(np.count_nonzero(z1 * z1 + z2 * z2 > crit))
        p_mc = hits / n
        se = math.sqrt(p_mc * (1 - p_mc) / n)
        assert abs(noncentral_chi2_sf(crit, 2, 4.0) - p_mc) < 3 * se

    def test_monotone_in_x_and_ncp(self):
        xs = np.linspace(0.0, 25.0, 60)
        vals = [noncentral_chi2_sf(x, 2, 3.0) for x in xs]
        assert np.all(np.diff(vals) <= 1e-15)
        ncps = np.linspace(0.0, 20.0, 60)
        vals = [noncentral_chi2_sf(5.0, 2, c) for c in ncps]
        assert np.all(np.diff(vals) >= -1e-15)

    def test_large_ncp_stability(self):
        assert_allclose(
            noncentral_chi2_sf(900.0, 2, 800.0),
            stats.ncx2.sf(900.0, 2, 800.0),
            rtol=1e-8,
        )

    def test_domain(self):
        with pytest.raises(DomainError):
            noncentral_chi2_sf(-1.0, 2, 1.0)
        with pytest.raises(DomainError):
            noncentral_chi2_sf(1.0, 2, -1.0)


class TestGammaSample:
    def test_exponential_mean(self):
        rng = np.random.default_rng(7)
        x = gamma_sample(1.0, rng, size=10**6)
        assert abs(x.mean() - 1.0) < 3 * x.std(ddof=1) / math.sqrt(x.size)

    def test_moments_shape_above_one(self):
        rng = np.random.default_rng(8)
        x = gamma_sample(2.5, rng, size=10**6)
        n = x.size
        assert abs(x.mean() - 2.5) < 4 * x.std(ddof=1) / math.sqrt(n)
        v = (x - x.mean()) ** 2
        assert abs(x.var(ddof=1) - 2.5) < 4 * v.std(ddof=1) / math.sqrt(n)

    def test_ks_small_shape(self):
        rng = np.random.default_rng(9)
        x = gamma_sample(0.5, rng, size=10**5)
        stat = stats.kstest(x, lambda v: sc.gammainc(0.5, v)).statistic
        assert stat < 1.63 / math.sqrt(10**5)

    def test_scalar_and_empty(self):
        rng = np.random.default_rng(10)
        v = gamma_sample(3.0, rng)
        assert isinstance(v, float) and v > 0
        assert gamma_sample(3.0, rng, size=0).size == 0

    def test_positive_draws(self):
        rng = np.random.default_rng(11)
        assert np.all(gamma_sample(0.4, rng, size=10**4) >= 0.0)

    def test_domain(self):
        rng = np.random.default_rng(12)
        with pytest.raises(DomainError):
            gamma_sample(0.0, rng)
        with pytest.raises(DomainError):
            gamma_sample(-1.0, rng)


class TestIntegrate:
    def test_exponential(self):
        assert_allclose(integrate(math.exp, (-math.inf, 0.0)), 1.0, rtol=0, atol=1e-10)
        assert_allclose(
            integrate(lambda t: math.exp(-t), (0.0, math.inf)), 1.0, rtol=0, atol=1e-10
        )

    @pytest.mark.parametrize("x", [1.0, 1.5, 2.0, 3.0])
    def test_log_weighted_gamma_identities(self, x):
        # int_0^inf t^(x-1) log(t) e^(-t) dt = Gamma(x) psi(x)
        val = integrate(
            lambda t: t ** (x - 1) * math.log(t) * math.exp(-t), (0.0, math.inf)
        )
        ref = math.exp(log_gamma(x)) * digamma(x)
        assert_allclose(val, ref, rtol=0, atol=1e-9)
        # int_0^inf t^(x-1) log(t)^2 e^(-t) dt = Gamma(x) (psi'(x) + psi(x)^2)
        val2 = integrate(
            lambda t: t ** (x - 1) * math.log(t) ** 2 * math.exp(-t), (0.0, math.inf)
        )
        ref2 = math.exp(log_gamma(x)) * (trigamma(x) + digamma(x) ** 2)
        assert_allclose(val2, ref2, rtol=0, atol=1e-9)

    def test_frozen_values(self):
        # Gamma(2) psi(2) and Gamma(2) (psi'(2) + psi(2)^2), 50-digit references
        val = integrate(lambda t: t * math.log(t) * math.exp(-t), (0.0, math.inf))
        assert_allclose(val, 0.4227843350984671, rtol=0, atol=1e-10)
        val2 = integrate(lambda t: t * math.log(t) ** 2 * math.exp(-t), (0.0, math.inf))
        assert_allclose(val2, 0.8236806608528794, rtol=0, atol=1e-10)

    def test_accuracy_error_carries_estimate(self):
        spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=1)
        with pytest.raises(AccuracyError) as err:
            integrate(lambda t: math.sin(t * t), (0.0, 80.0), spec)
        assert err.value.estimate is not None and math.isfinite(err.value.estimate)

    def test_domain(self):
        with pytest.raises(DomainError):
            integrate(math.exp, (1.0, 1.0))
        with pytest.raises(DomainError):
            integrate(math.exp, (2.0, 1.0))
        with pytest.raises(DomainError):
            integrate(math.exp, (math.nan, 1.0))

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(rel_tol=-1e-3)
        with pytest.raises(DomainError):
            QuadratureSpec(max_subdivisions=0)
