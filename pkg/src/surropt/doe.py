"""Initial designs and candidate pools."""
from __future__ import annotations

import numpy as np

__all__ = ["lhd", "uniform_pool", "stratum_indices"]


def _check_bounds(bounds):
    bounds = np.asarray(bounds, dtype=float)
    if bounds.ndim != 2 or bounds.shape[1] != 2:
        raise ValueError("bounds must have shape (d, 2)")
    if np.any(bounds[:, 1] < bounds[:, 0]):
        raise ValueError("each lower bound must not exceed its upper bound")
    return bounds


def lhd(n: int, bounds, rng: np.random.Generator) -> np.ndarray:
    """Latin hypercube design of ``n`` points, randomly paired across dimensions.

    Each axis is cut into ``n`` equal-width strata and every stratum holds
    exactly one point, placed uniformly at random inside it.
    """
    if n < 1:
        raise ValueError("design size must be at least 1")
    bounds = _check_bounds(bounds)
    d = bounds.shape[0]
    strata = np.column_stack([rng.permutation(n) for _ in range(d)])
    unit = (strata + rng.random((n, d))) / n
    return bounds[:, 0] + unit * (bounds[:, 1] - bounds[:, 0])


def stratum_indices(points, bounds, n: int) -> np.ndarray:
    """Stratum index (0..n-1) of every coordinate, for checking LHD structure."""
    bounds = _check_bounds(bounds)
    width = bounds[:, 1] - bounds[:, 0]
    idx = np.floor((np.asarray(points) - bounds[:, 0]) / width * n).astype(int)
    return np.clip(idx, 0, n - 1)


def uniform_pool(size: int, bounds, rng: np.random.Generator) -> np.ndarray:
    """``size`` i.i.d. uniform points in the box."""
    if size < 1:
        raise ValueError("pool size must be at least 1")
    bounds = _check_bounds(bounds)
    return rng.uniform(bounds[:, 0], bounds[:, 1], size=(size, bounds.shape[0]))
