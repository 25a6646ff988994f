"""Single-step Tukey HSD: simultaneous difference CIs and rank CIs.

Every null hypothesis "mu_i = mu_j" is tested against one common critical
value, the Monte-Carlo (1-alpha)-quantile of the standardized pairwise range.
Counting non-rejections around each sorted observation turns the pairwise
decisions into simultaneous confidence intervals for the ranks.
"""

from dataclasses import dataclass

import numpy as np

from .core import CenterSample, PairSet, RankInterval, SimultaneousRankCIs
from .mcquantile import McPool, studentized_range_quantile

__all__ = ["DifferenceCI", "tukey_difference_cis", "tukey_rank_cis", "tukey_rejected_pairs"]


@dataclass(frozen=True)
class DifferenceCI:
    """Simultaneous confidence interval for the difference mu_i - mu_j."""

    i: int
    j: int
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"difference CI has lower > upper: {self}")


def _check_pool(sample: CenterSample, pool: McPool) -> None:
    if not pool.matches_sigma(sample.sigma):
        raise ValueError("pool was not built with the sample's sigma vector")


def _statistic_matrix(sample: CenterSample) -> np.ndarray:
    """|y_i - y_j| / sqrt(sigma_i^2 + sigma_j^2) for all i, j."""
    y = sample.y
    sig2 = sample.sigma ** 2
    return np.abs(y[:, None] - y[None, :]) / np.sqrt(sig2[:, None] + sig2[None, :])


def tukey_difference_cis(sample: CenterSample, alpha: float, pool: McPool) -> list[DifferenceCI]:
    """Simultaneous CIs ``y_i - y_j +- sqrt(sigma_i^2 + sigma_j^2) * q`` for all i != j.

    The list covers every ordered pair in lexicographic order; the interval
    for (j, i) is the negation of the one for (i, j), reversed.
    """
    _check_pool(sample, pool)
    n = sample.n
    if n < 2:
        return []
    q = studentized_range_quantile(pool, alpha)
    y = sample.y
    sig2 = sample.sigma ** 2
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            half = np.sqrt(sig2[i] + sig2[j]) * q
            out.append(DifferenceCI(i, j, float(y[i] - y[j] - half), float(y[i] - y[j] + half)))
    return out


def tukey_rejected_pairs(sample: CenterSample, alpha: float, pool: McPool) -> PairSet:
    """Positive pairs (i, j), i > j, whose standardized difference exceeds q.

    Rejection is strict (statistic > q); a statistic exactly equal to the
    critical value is not rejected.
    """
    _check_pool(sample, pool)
    if sample.n < 2:
        return PairSet()
    q = studentized_range_quantile(pool, alpha)
    stat = _statistic_matrix(sample)
    rejected = {
        (i, j)
        for i in range(sample.n)
        for j in range(i)
        if stat[i, j] > q
    }
    return PairSet(frozenset(rejected))


def tukey_rank_cis(sample: CenterSample, alpha: float, pool: McPool) -> SimultaneousRankCIs:
    """Simultaneous rank CIs from single-step Tukey HSD.

    For sorted index i (1-based rank i+1), the lower bound is 1 plus the
    number of centers below i whose difference from i is rejected, and the
    upper bound is n minus the rejected count above i.  The counting handles
    non-contiguous rejection patterns, which can occur with unequal sigmas.
    """
    _check_pool(sample, pool)
    n = sample.n
    if n == 1:
        return SimultaneousRankCIs((RankInterval(1, 1),), alpha, "tukey")
    q = studentized_range_quantile(pool, alpha)
    stat = _statistic_matrix(sample)
    rejected = stat > q
    intervals = []
    for i in range(n):
        lower = 1 + int(np.count_nonzero(rejected[i, :i]))
        upper = n - int(np.count_nonzero(rejected[i, i + 1:]))
        intervals.append(RankInterval(lower, upper))
    return SimultaneousRankCIs(tuple(intervals), alpha, "tukey")
