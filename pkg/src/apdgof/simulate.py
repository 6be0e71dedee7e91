"""Monte Carlo verification harness for the modified score test.

Empirical size under the null, empirical power under local shape
alternatives, and Monte Carlo / quadrature cross-checks of the closed-form
score covariance.  Every study is a pure function of its configuration:
replicate ``r`` draws from a random stream derived deterministically from
``(seed, r)``, so reports are byte-identical regardless of scheduling or
worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import apd
from .errors import ConfigError, DegenerateSampleError
from .numerics import QuadratureSpec, chi2_sf, integrate, noncentral_chi2_sf
from .score import (
    LocationScale,
    asymptotic_power,
    check_lambda,
    fisher_blocks,
    fit_null_mle,
    modified_score,
    noncentrality,
    stacked_scores,
    test_statistic,
)

__all__ = [
    "StudyConfig",
    "RejectionRate",
    "StudyReport",
    "McFisherCheck",
    "replicate_rng",
    "ks_distance",
    "run_null_study",
    "run_local_alternative_study",
    "mc_fisher_check",
    "quadrature_fisher",
    "mle_rmse_study",
]

_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class StudyConfig:
    """Configuration of one Monte Carlo study.

    ``delta`` is the local-alternative direction for the shape pair; leave it
    ``None`` for a null (size) study.  ``loc_scale`` sets the location and
    scale used to generate the data.
    """

    lam: float
    n: int
    reps: int
    seed: int
    alpha_grid: tuple[float, ...] = (0.05,)
    delta: tuple[float, float] | None = None
    loc_scale: LocationScale = LocationScale(0.0, 1.0)

    def __post_init__(self):
        try:
            check_lambda(self.lam)
        except Exception as exc:
            raise ConfigError(str(exc)) from None
        if int(self.n) != self.n or self.n < 10:
            raise ConfigError(f"n must be an integer >= 10, got {self.n}")
        if int(self.reps) != self.reps or self.reps < 100:
            raise ConfigError(f"reps must be an integer >= 100, got {self.reps}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        alphas = tuple(float(a) for a in self.alpha_grid)
        if not alphas:
            raise ConfigError("alpha_grid must be nonempty")
        if any(not 0.0 < a < 1.0 for a in alphas):
            raise ConfigError(f"alpha levels must lie in (0, 1), got {alphas}")
        if len(set(alphas)) != len(alphas):
            raise ConfigError(f"alpha levels must be distinct, got {alphas}")
        object.__setattr__(self, "alpha_grid", alphas)
        if self.delta is not None:
            d = tuple(float(v) for v in self.delta)
            if len(d) != 2 or not all(math.isfinite(v) for v in d):
                raise ConfigError(f"delta must be a finite 2-vector, got {self.delta}")
            object.__setattr__(self, "delta", d)

    def shifted_shape(self) -> tuple[float, float]:
        """Shape pair ``(1/2, lam) + delta / sqrt(n)`` of the alternative."""
        if self.delta is None:
            raise ConfigError("delta is not set")
        root_n = math.sqrt(self.n)
        t1 = 0.5 + self.delta[0] / root_n
        t2 = self.lam + self.delta[1] / root_n
        if not 0.0 < t1 < 1.0 or not t2 > 0.0:
            raise ConfigError(
                f"shifted shape ({t1}, {t2}) leaves the parameter space"
            )
        return t1, t2


@dataclass(frozen=True)
class RejectionRate:
    """Empirical rejection rate at one level, with its binomial standard error."""

    alpha: float
    rate: float
    std_error: float
    predicted: float | None = None


@dataclass(frozen=True)
class StudyReport:
    """Summary of a Monte Carlo study."""

    kind: str
    config: StudyConfig
    rejections: tuple[RejectionRate, ...]
    ks_stat: float
    replicate_failures: int

    def to_dict(self) -> dict:
        """Plain-types view, suitable for JSON serialization."""
        return {
            "schema_version": _SCHEMA_VERSION,
            "kind": self.kind,
            "config": {
                "lambda": self.config.lam,
                "n": self.config.n,
                "reps": self.config.reps,
                "seed": self.config.seed,
                "alpha_grid": list(self.config.alpha_grid),
                "delta": None if self.config.delta is None else list(self.config.delta),
                "mu": self.config.loc_scale.mu,
                "sigma": self.config.loc_scale.sigma,
            },
            "rejections": [
                {
                    "alpha": r.alpha,
                    "rate": r.rate,
                    "std_error": r.std_error,
                    "predicted": r.predicted,
                }
                for r in self.rejections
            ],
            "ks_stat": self.ks_stat,
            "replicate_failures": self.replicate_failures,
        }

    def to_json(self) -> str:
        """Canonical JSON encoding (stable key order)."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class McFisherCheck:
    """Sample covariance of the stacked scores, with per-entry standard errors."""

    lam: float
    draws: int
    seed: int
    estimate: np.ndarray
    std_error: np.ndarray


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Random stream for replicate ``index``, derived from ``(seed, index)``.

    Uses a spawn-key seed sequence, so streams are independent of how
    replicates are scheduled across workers.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def ks_distance(values, cdf) -> float:
    """Kolmogorov-Smirnov distance between a sample and a reference CDF."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n == 0:
        raise ConfigError("cannot compute a KS distance from an empty sample")
    c = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - c, c - (i - 1) / n)))


def _replicate_block(args) -> list[tuple[int, float, float]]:
    """Run a block of replicates; returns (index, t_stat, p_value) rows.

    Degenerate replicates are reported with NaN entries so the caller can
    count them.  Top-level function so process pools can pickle it.
    """
    lam, n, seed, theta1, theta2, mu, sigma, indices = args
    params = apd.ApdParams(theta1=theta1, theta2=theta2, mu=mu, sigma=sigma)
    rows = []
    for r in indices:
        rng = replicate_rng(seed, r)
        data = apd.sample(params, n, rng)
        try:
            fit = fit_null_mle(data, lam)
            score = modified_score(data, lam, fit)
            report = test_statistic(score, n, lam)
        except DegenerateSampleError:
            rows.append((r, math.nan, math.nan))
            continue
        rows.append((r, report.t_stat, report.p_value))
    return rows


def _run_replicates(
    cfg: StudyConfig, params: apd.ApdParams, workers: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """T statistics and p-values over all replicates, in replicate order."""
    args = (
        cfg.lam,
        cfg.n,
        cfg.seed,
        params.theta1,
        params.theta2,
        params.mu,
        params.sigma,
    )
    if workers <= 1:
        rows = _replicate_block(args + (range(cfg.reps),))
    else:
        blocks = [
            args + (idx,)
            for idx in np.array_split(np.arange(cfg.reps), min(4 * workers, cfg.reps))
        ]
        rows = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for block in pool.map(_replicate_block, blocks):
                rows.extend(block)
    rows.sort(key=lambda row: row[0])
    t = np.array([row[1] for row in rows])
    p = np.array([row[2] for row in rows])
    ok = np.isfinite(t)
    failures = int(np.count_nonzero(~ok))
    return t[ok], p[ok], failures


def _rejection_rates(
    p_values: np.ndarray,
    alphas: tuple[float, ...],
    predictions: dict[float, float] | None,
) -> tuple[RejectionRate, ...]:
    m = p_values.size
    out = []
    for a in alphas:
        rate = float(np.count_nonzero(p_values < a) / m)
        se = math.sqrt(rate * (1.0 - rate) / m)
        pred = None if predictions is None else predictions[a]
        out.append(RejectionRate(alpha=a, rate=rate, std_error=se, predicted=pred))
    return tuple(out)


def run_null_study(cfg: StudyConfig, workers: int = 1) -> StudyReport:
    """Empirical size study: data generated under the null.

    Reports per-level rejection rates and the KS distance between the
    observed statistics and the central chi-square(2) law.
    """
    if cfg.delta is not None:
        raise ConfigError("null study must not set delta")
    params = apd.ApdParams(
        theta1=0.5, theta2=cfg.lam, mu=cfg.loc_scale.mu, sigma=cfg.loc_scale.sigma
    )
    t, p, failures = _run_replicates(cfg, params, workers)
    ks = ks_distance(t, lambda v: 1.0 - np.vectorize(chi2_sf)(v, 2))
    return StudyReport(
        kind="size",
        config=cfg,
        rejections=_rejection_rates(p, cfg.alpha_grid, None),
        ks_stat=ks,
        replicate_failures=failures,
    )


def run_local_alternative_study(cfg: StudyConfig, workers: int = 1) -> StudyReport:
    """Empirical power study under the local alternative ``cfg.delta``.

    Data are generated with the shape pair shifted by ``delta / sqrt(n)``;
    rejection rates are reported next to the predicted asymptotic power, and
    the KS distance is taken against the noncentral chi-square(2) law.
    """
    if cfg.delta is None:
        raise ConfigError("local-alternative study requires delta")
    t1, t2 = cfg.shifted_shape()
    params = apd.ApdParams(
        theta1=t1, theta2=t2, mu=cfg.loc_scale.mu, sigma=cfg.loc_scale.sigma
    )
    t, p, failures = _run_replicates(cfg, params, workers)
    predictions = {
        a: asymptotic_power(cfg.delta, cfg.lam, a) for a in cfg.alpha_grid
    }
    ncp = noncentrality(cfg.delta, cfg.lam)
    ks = ks_distance(t, lambda v: 1.0 - np.vectorize(noncentral_chi2_sf)(v, 2, ncp))
    return StudyReport(
        kind="power",
        config=cfg,
        rejections=_rejection_rates(p, cfg.alpha_grid, predictions),
        ks_stat=ks,
        replicate_failures=failures,
    )


def mc_fisher_check(lam: float, n_draws: int, seed: int) -> McFisherCheck:
    """Monte Carlo estimate of the 4x4 score covariance under the null.

    Sample covariance of the stacked scores over ``n_draws`` standardized
    null variates, with per-entry standard errors; each entry should fall
    within a few standard errors of the closed form.
    """
    lam = check_lambda(lam)
    n_draws = int(n_draws)
    if n_draws < 10**5:
        raise ConfigError(f"n_draws must be at least 1e5, got {n_draws}")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    y = apd.sample(apd.ApdParams(theta1=0.5, theta2=lam), n_draws, rng)
    v = stacked_scores(y, lam)
    centered = v - v.mean(axis=1, keepdims=True)
    estimate = centered @ centered.T / (n_draws - 1)
    std_error = np.empty((4, 4))
    for a in range(4):
        for b in range(a, 4):
            prod = centered[a] * centered[b]
            std_error[a, b] = std_error[b, a] = prod.std(ddof=1) / math.sqrt(n_draws)
    return McFisherCheck(
        lam=lam, draws=n_draws, seed=int(seed), estimate=estimate, std_error=std_error
    )


def quadrature_fisher(lam: float, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Quadrature evaluation of the 4x4 score covariance under the null.

    Integrates each product of score components against the standardized
    null density over the two half-lines (split at the mode, where log
    factors are non-smooth).  Independent cross-check of
    :func:`apdgof.score.fisher_blocks`.
    """
    lam = check_lambda(lam)
    norm = 1.0 / (2.0 ** (1.0 + 1.0 / lam) * math.gamma(1.0 + 1.0 / lam))

    def density(y: float) -> float:
        return norm * math.exp(-0.5 * abs(y) ** lam)

    def entry(a: int, b: int) -> float:
        def f(y: float) -> float:
            s = stacked_scores(y, lam)
            return float(s[a] * s[b]) * density(y)

        return integrate(f, (-math.inf, 0.0), spec) + integrate(f, (0.0, math.inf), spec)

    out = np.empty((4, 4))
    for a in range(4):
        for b in range(a, 4):
            out[a, b] = out[b, a] = entry(a, b)
    return out


def mle_rmse_study(
    lam: float,
    n: int,
    reps: int,
    seed: int,
    loc_scale: LocationScale = LocationScale(0.0, 1.0),
) -> tuple[float, float]:
    """Root-mean-square errors of the fitted location and scale under the null.

    Used to verify the root-n consistency rate: the RMSE at sample size
    ``16 n`` should be about a quarter of the RMSE at ``n``.
    """
    lam = check_lambda(lam)
    params = apd.ApdParams(
        theta1=0.5, theta2=lam, mu=loc_scale.mu, sigma=loc_scale.sigma
    )
    sq_mu = 0.0
    sq_sigma = 0.0
    for r in range(reps):
        rng = replicate_rng(seed, r)
        fit = fit_null_mle(apd.sample(params, n, rng), lam)
        sq_mu += (fit.mu - loc_scale.mu) ** 2
        sq_sigma += (fit.sigma - loc_scale.sigma) ** 2
    return math.sqrt(sq_mu / reps), math.sqrt(sq_sigma / reps)
