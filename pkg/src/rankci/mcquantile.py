"""Monte-Carlo quantiles of standardized pairwise maxima.

One frozen pool of centered Gaussian draws backs every quantile evaluation.
Because all quantiles are order statistics of row-wise maxima taken over the
*same* rows, the quantile is exactly (not just statistically) monotone in the
pair set: more pairs can only raise each row's maximum.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import PairSet

__all__ = [
    "McPool",
    "make_mc_pool",
    "studentized_range_quantile",
    "restricted_max_quantile",
    "DEFAULT_MC_SAMPLES",
    "MC_SAMPLES_FLOOR",
]

#: Pool size used by the estimators unless the caller asks for more.
DEFAULT_MC_SAMPLES = 100_000

#: Hard floor below which quantile estimates are too noisy to trust.
MC_SAMPLES_FLOOR = 1_000


@dataclass(frozen=True)
class McPool:
    """Frozen N x n matrix of independent centered Gaussian draws.

    Column i has scale ``sigma[i]``.  The pool is generated once and reused
    for every critical-value evaluation; this sharing is what makes the
    sequential procedure's critical values provably non-increasing.
    """

    draws: np.ndarray
    sigma: np.ndarray
    seed: int
    n_samples: int
    _cols: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        if draws.ndim != 2:
            raise ValueError("draws must be a 2-d matrix")
        if draws.shape != (self.n_samples, sigma.size):
            raise ValueError("draws shape must be (n_samples, len(sigma))")
        draws.setflags(write=False)
        sigma.setflags(write=False)
        # column-contiguous copy: pairwise column ops dominate the runtime
        cols = np.ascontiguousarray(draws.T)
        cols.setflags(write=False)
        object.__setattr__(self, "draws", draws)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "_cols", cols)

    @property
    def n_centers(self) -> int:
        return self.sigma.size

    def matches_sigma(self, sigma) -> bool:
        return np.array_equal(self.sigma, np.asarray(sigma, dtype=float))


def make_mc_pool(sigma, n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0,
                 floor: int = MC_SAMPLES_FLOOR) -> McPool:
    """Draw the reusable pool of centered Gaussians, one column per center.

    Deterministic for fixed ``(sigma, n_samples, seed)``; the generator is
    PCG64 via ``numpy.random.default_rng``, so pools reproduce bit-for-bit
    across platforms.

    Raises
    ------
    ValueError
        If ``n_samples`` is below ``floor`` or any sigma is not positive.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 1 or sigma.size < 1:
        raise ValueError("sigma must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(sigma)) or np.any(sigma <= 0):
        raise ValueError("every sigma must be finite and strictly positive")
    n_samples = int(n_samples)
    if n_samples < floor:
        raise ValueError(f"n_samples={n_samples} is below the floor of {floor}")
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((n_samples, sigma.size)) * sigma[None, :]
    return McPool(draws=draws, sigma=sigma, seed=int(seed), n_samples=n_samples)


def empirical_quantile(values: np.ndarray, alpha: float) -> float:
    """Upper order statistic at 1-based index ceil((1-alpha)*N).

    This convention never falls below the conventional empirical quantile,
    and it is deterministic, which keeps the monotonicity arguments exact.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    n = values.size
    k = int(np.ceil((1.0 - alpha) * n))
    k = min(max(k, 1), n)
    return float(np.partition(values, k - 1)[k - 1])


def pair_row_maxima(pool: McPool, i_idx: np.ndarray, j_idx: np.ndarray) -> np.ndarray:
    """Per-row max of (Y_i - Y_j) / sqrt(sigma_i^2 + sigma_j^2) over given pairs."""
    cols = pool._cols
    sig2 = pool.sigma ** 2
    out = np.full(pool.n_samples, -np.inf)
    diff = np.empty(pool.n_samples)
    for i, j in zip(i_idx, j_idx):
        np.subtract(cols[i], cols[j], out=diff)
        diff /= np.sqrt(sig2[i] + sig2[j])
        np.maximum(out, diff, out=out)
    return out


def full_row_maxima(pool: McPool) -> np.ndarray:
    """Per-row max over *all* ordered pairs (the studentized-range statistic).

    With equal sigmas the maximum reduces to the standardized range
    (max - min); with unequal sigmas every pair must be visited.
    """
    n = pool.n_centers
    if n < 2:
        raise ValueError("need at least 2 centers to form a pair")
    sigma = pool.sigma
    if np.all(sigma == sigma[0]):
        scale = np.sqrt(sigma[0] ** 2 + sigma[0] ** 2)
        return (pool.draws.max(axis=1) - pool.draws.min(axis=1)) / scale
    i_idx, j_idx = PairSet.all_pairs(n).index_arrays()
    return pair_row_maxima(pool, i_idx, j_idx)


def studentized_range_quantile(pool: McPool, alpha: float) -> float:
    """Empirical (1-alpha)-quantile of the standardized pairwise range.

    The statistic per pool row is
    ``max over i != j of |Y_i - Y_j| / sqrt(sigma_i^2 + sigma_j^2)``,
    equal to the restricted maximum over the full ordered-pair set.
    """
    return empirical_quantile(full_row_maxima(pool), alpha)


def restricted_max_quantile(pool: McPool, pairs: PairSet, alpha: float) -> float:
    """Empirical (1-alpha)-quantile of the maximum over a restricted pair set.

    The statistic per pool row is
    ``max over (i, j) in pairs of (Y_i - Y_j) / sqrt(sigma_i^2 + sigma_j^2)``
    (signed, so one-sided hypotheses are represented faithfully).  On a fixed
    pool the result is exactly non-decreasing in the pair set.

    Raises
    ------
    ValueError
        If ``pairs`` is empty or references a column outside the pool.
    """
    if not pairs:
        raise ValueError("pair set is empty: no hypothesis left to calibrate")
    i_idx, j_idx = pairs.index_arrays()
    n = pool.n_centers
    if i_idx.max() >= n or j_idx.max() >= n:
        raise ValueError("pair index out of range for this pool")
    return empirical_quantile(pair_row_maxima(pool, i_idx, j_idx), alpha)
