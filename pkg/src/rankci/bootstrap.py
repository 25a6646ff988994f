"""Bootstrap rank CIs: pointwise intervals plus a bisected joint level.

This is the baseline the simulation harness shows to under-cover.  Pointwise
rank intervals are empirical quantiles of each center's rank across K
parametric bootstrap replicates; the joint method then searches, by bisection
on the pointwise level beta, for the narrowest family whose *estimated*
joint coverage still clears 1 - alpha.  Deliberately, the same K draws are
used both to build the intervals and to estimate their joint coverage; the
method is reproduced faithfully, not repaired.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import CenterSample, RankInterval, SimultaneousRankCIs

__all__ = [
    "BootstrapConfig",
    "ZhangResult",
    "make_bootstrap_draws",
    "spiegelhalter_pointwise",
    "zhang_simultaneous",
]


@dataclass(frozen=True)
class BootstrapConfig:
    """Knobs for the bootstrap baseline."""

    n_boot: int = 10_000
    precision: float = 1e-6
    maxiter: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.n_boot < 1:
            raise ValueError("n_boot must be at least 1")
        if self.precision <= 0:
            raise ValueError("precision must be positive")
        if self.maxiter < 1:
            raise ValueError("maxiter must be at least 1")


@dataclass(frozen=True)
class ZhangResult:
    """Joint bootstrap CIs with the bisection outcome."""

    cis: SimultaneousRankCIs
    achieved_coverage: float
    beta_final: float
    converged: bool
    iterations: int


def quantile_type3(sorted_values: np.ndarray, p: float) -> float:
    """Nearest-order-statistic quantile (SAS convention, R's ``type = 3``).

    With ``nppm = n p - 1/2``, take order statistic ``floor(nppm)`` when
    ``nppm`` hits an even integer, else ``floor(nppm) + 1``, clamped to
    ``[1, n]`` (1-based).
    """
    n = sorted_values.size
    nppm = n * p - 0.5
    j = math.floor(nppm + 1e-9)
    g = nppm - j
    gamma = 0 if (abs(g) < 1e-9 and j % 2 == 0) else 1
    idx = min(max(j + gamma, 1), n)
    return float(sorted_values[idx - 1])


def make_bootstrap_draws(sample: CenterSample, cfg: BootstrapConfig) -> np.ndarray:
    """K x n parametric bootstrap matrix, row k drawn from N(y, sigma^2)."""
    rng = np.random.default_rng(cfg.seed)
    return rng.standard_normal((cfg.n_boot, sample.n)) * sample.sigma[None, :] + sample.y[None, :]


def _rank_rows(draws: np.ndarray) -> np.ndarray:
    """1-based rank of every entry within its row (ties broken by position)."""
    k, n = draws.shape
    ranks = np.empty((k, n), dtype=np.intp)
    order = np.argsort(draws, axis=1, kind="stable")
    ranks[np.arange(k)[:, None], order] = np.arange(1, n + 1)[None, :]
    return ranks


def _interval_bounds(sorted_ranks: np.ndarray, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-center [beta/2, 1-beta/2] rank quantiles from presorted ranks."""
    n = sorted_ranks.shape[0]
    lower = np.array([quantile_type3(sorted_ranks[i], beta / 2.0) for i in range(n)])
    upper = np.array([quantile_type3(sorted_ranks[i], 1.0 - beta / 2.0) for i in range(n)])
    return lower.astype(np.intp), upper.astype(np.intp)


def spiegelhalter_pointwise(sample: CenterSample, beta: float,
                            boot_draws: np.ndarray) -> list[RankInterval]:
    """Pointwise rank CIs at level ``1 - beta`` from bootstrap replicates.

    Each replicate (row of ``boot_draws``) is ranked; center i's interval is
    the [beta/2, 1-beta/2] empirical quantile range of its rank, using the
    nearest-order-statistic convention.  Pointwise means valid one center at
    a time; the family has no joint guarantee.
    """
    if not 0 < beta < 1:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    boot_draws = np.asarray(boot_draws, dtype=float)
    if boot_draws.ndim != 2 or boot_draws.shape[1] != sample.n:
        raise ValueError("boot_draws must be a K x n matrix matching the sample")
    k = boot_draws.shape[0]
    if k * (beta / 2.0) < 1.5:
        warnings.warn(
            f"n_boot={k} is too small to resolve beta={beta:g}; "
            "quantile indices collapse to the extremes",
            stacklevel=2,
        )
    ranks = _rank_rows(boot_draws)
    sorted_ranks = np.sort(ranks.T, axis=1)
    lower, upper = _interval_bounds(sorted_ranks, beta)
    return [RankInterval(int(lo), int(up)) for lo, up in zip(lower, upper)]


def _joint_coverage(ranks: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> float:
    """Fraction of replicates whose whole rank vector stays inside the bounds."""
    outside = (ranks < lower[None, :]) | (ranks > upper[None, :])
    return 1.0 - np.count_nonzero(outside.any(axis=1)) / ranks.shape[0]


def zhang_simultaneous(sample: CenterSample, alpha: float,
                       cfg: BootstrapConfig) -> ZhangResult:
    """Joint bootstrap rank CIs via bisection on the pointwise level.

    Bisects beta over (0, alpha]: when the estimated joint coverage of the
    pointwise family at level beta clears ``1 - alpha`` the bracket moves up
    (narrower intervals), otherwise down.  One K x n draw matrix serves both
    interval construction and coverage estimation.  If the final candidate
    under-covers, beta falls back to the last feasible bracket end, so the
    reported coverage is at least ``1 - alpha`` whenever that fallback fires.

    Returns a :class:`ZhangResult`; ``converged`` is False when the bracket
    was still wider than ``cfg.precision`` at ``cfg.maxiter`` iterations.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    draws = make_bootstrap_draws(sample, cfg)
    ranks = _rank_rows(draws)
    sorted_ranks = np.sort(ranks.T, axis=1)

    def coverage_at(beta: float) -> float:
        lower, upper = _interval_bounds(sorted_ranks, beta)
        return _joint_coverage(ranks, lower, upper)

    beta1, beta2 = 0.0, alpha
    beta = (beta1 + beta2) / 2.0
    iterations = 0
    while abs(beta1 - beta2) > cfg.precision and iterations < cfg.maxiter:
        if coverage_at(beta) >= 1.0 - alpha:
            beta1 = beta
        else:
            beta2 = beta
        beta = (beta1 + beta2) / 2.0
        iterations += 1
    converged = abs(beta1 - beta2) <= cfg.precision

    achieved = coverage_at(beta)
    if achieved < 1.0 - alpha:
        beta = beta1
        achieved = coverage_at(beta)
    lower, upper = _interval_bounds(sorted_ranks, beta)
    intervals = tuple(RankInterval(int(lo), int(up)) for lo, up in zip(lower, upper))
    cis = SimultaneousRankCIs(intervals, alpha, "zhang")
    return ZhangResult(
        cis=cis,
        achieved_coverage=achieved,
        beta_final=beta,
        converged=converged,
        iterations=iterations,
    )
