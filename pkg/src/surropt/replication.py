"""Evaluation policies for noisy black boxes: none, fixed and smart replication.

Smart replication keeps sampling a new candidate while the lower end of its
t-interval sits below the upper end of the best sampled mean solution's
interval, up to ``r_max`` extra draws.  Under low noise intervals separate
quickly and little is spent; under high noise most candidates run to the cap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import stats

from .problem import Budget, NoisyObjective

__all__ = [
    "Dataset",
    "PointRecord",
    "evaluate_fixed_replication",
    "evaluate_no_replication",
    "evaluate_smart_replication",
    "t_quantile",
    "update_record",
]


def t_quantile(p: float, df: float) -> float:
    """Inverse CDF of Student's t with ``df`` degrees of freedom."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -t_quantile(1.0 - p, df)
    return float(stats.t.ppf(p, df))


@dataclass
class PointRecord:
    x: np.ndarray
    samples: list = field(default_factory=list)
    alpha: float = 0.05

    @property
    def r(self) -> int:
        return len(self.samples)

    @property
    def mean(self) -> float:
        # shifting by the first sample keeps repeated identical values exact
        first = self.samples[0]
        return first + math.fsum(s - first for s in self.samples) / len(self.samples)

    @property
    def std(self) -> float:
        """Sample standard deviation; ``nan`` below two samples."""
        if self.r < 2:
            return float("nan")
        m = self.mean
        return math.sqrt(math.fsum((s - m) ** 2 for s in self.samples) / (self.r - 1))

    @property
    def half_width(self) -> float:
        if self.r < 2:
            return float("inf")
        return t_quantile(1.0 - self.alpha / 2.0, self.r - 1) * self.std / math.sqrt(self.r)

    @property
    def ci(self) -> tuple:
        if self.r < 2:
            return (-math.inf, math.inf)
        m, h = self.mean, self.half_width
        return (m - h, m + h)


def update_record(rec: PointRecord, sample: float, alpha: Optional[float] = None) -> PointRecord:
    """Append one noisy observation; statistics are recomputed from all samples."""
    if alpha is not None:
        rec.alpha = alpha
    rec.samples.append(float(sample))
    return rec


class Dataset:
    """Evaluated points with their replication records and the running BSMS.

    ``observer`` is called with the dataset after every single sample, which
    is how the optimizer records its per-evaluation trace.
    """

    def __init__(self, alpha: float = 0.05, observer: Optional[Callable] = None):
        self.alpha = alpha
        self.records: list[PointRecord] = []
        self.bsms_index: Optional[int] = None
        self.observer = observer
        self._index: dict = {}
        self._means: list = []

    def __len__(self):
        return len(self.records)

    @property
    def X(self) -> np.ndarray:
        return np.array([rec.x for rec in self.records])

    @property
    def means(self) -> np.ndarray:
        return np.array(self._means)

    @property
    def bsms(self) -> Optional[PointRecord]:
        return None if self.bsms_index is None else self.records[self.bsms_index]

    def find(self, x) -> Optional[int]:
        return self._index.get(np.asarray(x, dtype=float).tobytes())

    def add_sample(self, x, value: float) -> int:
        """Record one observation at ``x`` (creating its record if new)."""
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        idx = self._index.get(key)
        if idx is None:
            idx = len(self.records)
            self._index[key] = idx
            self.records.append(PointRecord(x.copy(), alpha=self.alpha))
            self._means.append(0.0)
        rec = update_record(self.records[idx], value, self.alpha)
        self._means[idx] = rec.mean
        self._refresh_bsms()
        if self.observer is not None:
            self.observer(self)
        return idx

    def _refresh_bsms(self):
        # np.argmin returns the first minimizer, i.e. the smallest index on ties
        self.bsms_index = int(np.argmin(self._means))

    def training_data(self, keep_all: bool = False):
        """``(X, y)`` rows for fitting: per-point means, or every replicate."""
        if not keep_all:
            return self.X, self.means
        X = np.array([rec.x for rec in self.records for _ in rec.samples])
        y = np.array([s for rec in self.records for s in rec.samples])
        return X, y

    @property
    def total_samples(self) -> int:
        return sum(rec.r for rec in self.records)


def _sample(ds: Dataset, x, obj: NoisyObjective, budget: Budget) -> Optional[int]:
    if budget.exhausted:
        return None
    return ds.add_sample(x, obj(x, budget))


def evaluate_no_replication(ds: Dataset, P, obj: NoisyObjective, budget: Budget) -> list:
    """One noisy evaluation per candidate.  Returns the record indices touched."""
    touched = []
    for x in np.atleast_2d(P):
        idx = _sample(ds, x, obj, budget)
        if idx is None:
            break
        touched.append(idx)
    return touched


def evaluate_fixed_replication(ds: Dataset, P, r: int, obj: NoisyObjective, budget: Budget) -> list:
    """Exactly ``r`` noisy evaluations per candidate while the budget lasts."""
    if r < 1:
        raise ValueError("replication count must be at least 1")
    touched = []
    for x in np.atleast_2d(P):
        for _ in range(r):
            idx = _sample(ds, x, obj, budget)
            if idx is None:
                return touched
        touched.append(idx)
    return touched


def _ci_up(rec: PointRecord) -> float:
    # a single-sample BSMS contributes its observed value
    return rec.mean if rec.r < 2 else rec.ci[1]


def evaluate_smart_replication(
    ds: Dataset, P, r_max: int, alpha: float, obj: NoisyObjective, budget: Budget
) -> list:
    """Evaluate every candidate once, then replicate the promising ones.

    The threshold is the upper confidence limit of the BSMS that was current
    before this batch; it is refreshed after each candidate's loop.  A
    candidate ends with between 1 and ``r_max + 1`` samples.
    """
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    ds.alpha = alpha
    threshold = math.inf if ds.bsms is None else _ci_up(ds.bsms)
    touched = evaluate_no_replication(ds, P, obj, budget)
    for idx in touched:
        rec = ds.records[idx]
        while rec.ci[0] < threshold and rec.r <= r_max:
            if _sample(ds, rec.x, obj, budget) is None:
                return touched
        threshold = _ci_up(ds.bsms)
    return touched
