"""Benchmark objectives with important-variable masking and Gaussian output noise.

Each test function only reads its first ``m = ceil(fiv * d)`` coordinates; the
remaining ``d - m`` inputs are inert, which is how unimportant variables are
simulated.  Noise is additive Gaussian with standard deviation ``np * sigma0``
where ``sigma0`` is the output range over the initial design.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FUNCTIONS",
    "Budget",
    "BudgetExhausted",
    "NoisyObjective",
    "TestFunction",
    "eval_true",
    "sigma0_from_initial",
]


class BudgetExhausted(RuntimeError):
    """Raised when a black-box evaluation is requested past the budget limit."""


def rosenbrock(x):
    if x.size < 2:
        return 0.0
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def rastrigin(x):
    return float(10.0 * x.size + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x)))


def levy(x):
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[0]) ** 2
    body = np.sum((w[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[:-1] + 1.0) ** 2))
    tail = (w[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[-1]) ** 2)
    return float(head + body + tail)


def ackley(x):
    m = x.size
    out = (
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2) / m))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x)) / m)
        + 20.0
        + np.e
    )
    return float(out)


def zakharov(x):
    i = np.arange(1, x.size + 1)
    s = np.sum(0.5 * i * x)
    return float(np.sum(x**2) + s**2 + s**4)


@dataclass(frozen=True)
class _Spec:
    func: object
    lower: float
    upper: float
    minimizer: float


FUNCTIONS: dict[str, _Spec] = {
    "rosenbrock": _Spec(rosenbrock, -5.0, 10.0, 1.0),
    "rastrigin": _Spec(rastrigin, -5.12, 5.12, 0.0),
    "levy": _Spec(levy, -10.0, 10.0, 1.0),
    "ackley": _Spec(ackley, -32.768, 32.768, 0.0),
    "zakharov": _Spec(zakharov, -5.0, 10.0, 0.0),
}


def important_count(fiv: float, d: int) -> int:
    """Number of leading coordinates that enter the objective."""
    # guard against products like 0.07 * 100 = 7.000000000000001
    m = math.ceil(round(fiv * d, 9))
    return min(max(m, 1), d)


@dataclass(frozen=True)
class TestFunction:
    """A named benchmark in ``d`` dimensions, of which ``ceil(fiv*d)`` matter."""

    __test__ = False  # keep pytest from collecting this as a test class

    name: str
    d: int
    fiv: float = 1.0

    def __post_init__(self):
        key = self.name.lower()
        if key not in FUNCTIONS:
            raise ValueError(f"unknown test function {self.name!r}; choose from {sorted(FUNCTIONS)}")
        object.__setattr__(self, "name", key)
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not 0.0 < self.fiv <= 1.0:
            raise ValueError("fiv must lie in (0, 1]")

    @property
    def m(self) -> int:
        return important_count(self.fiv, self.d)

    @property
    def bounds(self) -> np.ndarray:
        """``(d, 2)`` array of ``[lower, upper]`` rows."""
        spec = FUNCTIONS[self.name]
        return np.tile([spec.lower, spec.upper], (self.d, 1))

    @property
    def minimizer(self) -> np.ndarray:
        return np.full(self.d, FUNCTIONS[self.name].minimizer)

    @property
    def f_min(self) -> float:
        return 0.0

    def __call__(self, x) -> float:
        return eval_true(self, x)


def eval_true(fn: TestFunction, x) -> float:
    """Noise-free objective value at ``x``; coordinates past ``fn.m`` are ignored."""
    x = np.asarray(x, dtype=float)
    if x.shape != (fn.d,):
        raise ValueError(f"expected a vector of length {fn.d}, got shape {x.shape}")
    b = fn.bounds
    if np.any(x < b[:, 0]) or np.any(x > b[:, 1]):
        raise ValueError("point lies outside the box bounds")
    return FUNCTIONS[fn.name].func(x[: fn.m])


def sigma0_from_initial(values) -> float:
    """Output range ``max - min`` of the initial design evaluations."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("sigma0 needs at least one output value")
    return float(values.max() - values.min())


@dataclass
class Budget:
    limit: int
    used: int = 0

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("budget limit must be positive")

    @property
    def remaining(self) -> int:
        return self.limit - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit

    def consume(self) -> int:
        if self.used >= self.limit:
            raise BudgetExhausted(f"budget of {self.limit} evaluations exhausted")
        self.used += 1
        return self.used


@dataclass
class NoisyObjective:
    """``f(x) + eps`` with ``eps ~ N(0, (noise * sigma0)**2)``.

    One normal draw is taken per call even when ``noise == 0`` so that the
    random stream advances identically across noise levels.
    """

    base: TestFunction
    noise: float = 0.0
    sigma0: float = 0.0
    rng: np.random.Generator = field(default_factory=np.random.default_rng)
    calls: int = 0

    def __post_init__(self):
        if not 0.0 <= self.noise < 1.0:
            raise ValueError("noise level must lie in [0, 1)")
        if self.sigma0 < 0:
            raise ValueError("sigma0 must be nonnegative")

    @property
    def std(self) -> float:
        return self.noise * self.sigma0

    def true(self, x) -> float:
        return eval_true(self.base, x)

    def __call__(self, x, budget: Budget) -> float:
        return eval_noisy(self, x, budget)


def eval_noisy(obj: NoisyObjective, x, budget: Budget) -> float:
    value = eval_true(obj.base, x)
    budget.consume()
    obj.calls += 1
    eps = obj.rng.standard_normal()
    if obj.std == 0.0:
        return value
    return value + obj.std * eps
