"""The surrogate optimization loop and its per-evaluation trace."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .doe import lhd, uniform_pool
from .kernels import FitError
from .problem import Budget, NoisyObjective, TestFunction, sigma0_from_initial
from .replication import (
    Dataset,
    evaluate_fixed_replication,
    evaluate_no_replication,
    evaluate_smart_replication,
)
from .sampling import augment_pool, eepa_select, min_distances
from .surrogates import SURROGATES, make_surrogate

__all__ = ["ExperimentConfig", "RunTrace", "TraceEntry", "export_trace", "run", "trace_from_rows"]

REPLICATIONS = ("none", "fixed", "smart")


@dataclass
class ExperimentConfig:
    function: str = "rosenbrock"
    d: int = 30
    fiv: float = 0.5
    noise: float = 0.0
    surrogate: str = "tkmars"
    replication: str = "none"
    r: int = 10  # fixed replication count, or the cap under smart replication
    alpha: float = 0.05
    budget: int = 1000
    n_initial: Optional[int] = None  # defaults to d + 1
    k_prime: int = 3
    pool_size: Optional[int] = None  # defaults to 100 * d
    seed: int = 0
    keep_all: bool = False
    mars_knots: object = 20
    max_terms: Optional[int] = None
    max_degree: int = 1
    minsplit: int = 20
    maxdepth: int = 30
    omega: float = 2.0
    eta: float = 1e-4
    gp_tune: bool = True

    def __post_init__(self):
        self.surrogate = self.surrogate.lower()
        self.replication = self.replication.lower()
        self.function = self.function.lower()
        if self.n_initial is None:
            self.n_initial = self.d + 1
        if self.pool_size is None:
            self.pool_size = 100 * self.d
        self.validate()

    def validate(self):
        TestFunction(self.function, self.d, self.fiv)
        if self.surrogate not in SURROGATES:
            raise ValueError(f"unknown surrogate {self.surrogate!r}")
        if self.replication not in REPLICATIONS:
            raise ValueError(f"replication must be one of {REPLICATIONS}")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError("noise level must lie in [0, 1)")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.r < 1:
            raise ValueError("replication count must be at least 1")
        for name in ("budget", "n_initial", "k_prime", "pool_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.mars_knots != "leaves" and int(self.mars_knots) < 1:
            raise ValueError("mars_knots must be a positive integer or 'leaves'")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class TraceEntry:
    eval_index: int
    bsms_true: float
    bsms_mean: float


@dataclass
class RunTrace:
    entries: list = field(default_factory=list)
    final_x: Optional[np.ndarray] = None
    final_mean: float = math.nan
    final_r: int = 0
    selected_variables: Optional[set] = None
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    @property
    def bsms_true(self) -> np.ndarray:
        return np.array([e.bsms_true for e in self.entries])

    @property
    def bsms_mean(self) -> np.ndarray:
        return np.array([e.bsms_mean for e in self.entries])


def export_trace(trace: RunTrace) -> list:
    """Rows ``(eval_index, bsms_true, bsms_mean)``; floats are kept exact."""
    return [(e.eval_index, e.bsms_true, e.bsms_mean) for e in trace.entries]


def trace_from_rows(rows) -> RunTrace:
    return RunTrace([TraceEntry(int(i), float(t), float(m)) for i, t, m in rows])


class _Recorder:
    """Dataset observer that appends one trace entry per sample."""

    def __init__(self, trace: RunTrace, obj: NoisyObjective):
        self.trace = trace
        self.obj = obj
        self._true_cache: dict = {}

    def __call__(self, ds: Dataset):
        best = ds.bsms
        key = ds.bsms_index
        if key not in self._true_cache:
            self._true_cache[key] = self.obj.true(best.x)
        self.trace.entries.append(TraceEntry(len(self.trace.entries) + 1, self._true_cache[key], best.mean))


def _surrogate_for(config: ExperimentConfig):
    return make_surrogate(
        config.surrogate,
        knots=config.mars_knots,
        max_terms=config.max_terms,
        max_degree=config.max_degree,
        minsplit=config.minsplit,
        maxdepth=config.maxdepth,
        omega=config.omega,
        eta=config.eta,
        tune=config.gp_tune,
    )


def _explore(pool, evaluated) -> np.ndarray:
    """Pool index farthest from everything evaluated (empty if none is new)."""
    dist = min_distances(pool, evaluated)
    if not np.any(dist > 0):
        return np.empty(0, dtype=int)
    return np.array([int(np.argmax(dist))])


def run(config: ExperimentConfig) -> RunTrace:
    """Run one optimization and return its trace.

    The design, the candidate pool and the noise draw from separate streams
    spawned from ``config.seed`` so that, for example, changing the noise
    level leaves the initial design and pool untouched.
    """
    config.validate()
    fn = TestFunction(config.function, config.d, config.fiv)
    design_rng, pool_rng, noise_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(config.seed).spawn(3)
    )
    budget = Budget(config.budget)
    trace = RunTrace(metadata={"fallbacks": [], "iterations": 0})

    X0 = lhd(config.n_initial, fn.bounds, design_rng)
    sigma0 = sigma0_from_initial([fn(x) for x in X0])
    obj = NoisyObjective(fn, config.noise, sigma0, noise_rng)
    trace.metadata["sigma0"] = sigma0

    ds = Dataset(config.alpha, observer=_Recorder(trace, obj))
    evaluate_no_replication(ds, X0, obj, budget)

    pool = uniform_pool(config.pool_size, fn.bounds, pool_rng)
    surrogate = _surrogate_for(config)
    fitted = False
    while not budget.exhausted:
        trace.metadata["iterations"] += 1
        keep_all = config.keep_all and surrogate.uses_replicates
        X, y = ds.training_data(keep_all)
        candidates_pool = pool
        failed = False
        try:
            surrogate.fit(X, y)
            fitted = True
            if len(surrogate.centroids()):
                candidates_pool = augment_pool(pool, surrogate.centroids())
            picks = eepa_select(candidates_pool, ds.X, surrogate.predict(candidates_pool), config.k_prime)
        except (FitError, np.linalg.LinAlgError, ValueError) as exc:
            trace.metadata["fallbacks"].append((budget.used, f"{type(exc).__name__}: {exc}"))
            picks = np.empty(0, dtype=int)
            failed = True
        if len(picks) == 0:
            picks = _explore(candidates_pool, ds.X)
            if len(picks) == 0:
                trace.metadata["stopped"] = "candidate pool exhausted"
                break
            if not failed:
                trace.metadata["fallbacks"].append((budget.used, "no candidate on the front"))
        P = candidates_pool[picks]
        if config.replication == "none":
            evaluate_no_replication(ds, P, obj, budget)
        elif config.replication == "fixed":
            evaluate_fixed_replication(ds, P, config.r, obj, budget)
        else:
            evaluate_smart_replication(ds, P, config.r, config.alpha, obj, budget)

    best = ds.bsms
    trace.final_x = best.x.copy()
    trace.final_mean = best.mean
    trace.final_r = best.r
    trace.metadata["points"] = len(ds)
    trace.metadata["replications"] = [rec.r for rec in ds.records]
    if fitted and surrogate.selected_variables() is not None:
        # the loop's last fit predates the final batch, so refit on everything
        try:
            surrogate.fit(*ds.training_data(config.keep_all and surrogate.uses_replicates))
            trace.selected_variables = set(surrogate.selected_variables())
        except (FitError, np.linalg.LinAlgError, ValueError):
            pass
    return trace
