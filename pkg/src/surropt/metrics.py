"""Area-under-curve scores of a best-so-far trace.

Both scores normalize the true objective of the incumbent to [0, 1] by the
trace maximum and the known optimum, then average a trapezoid rule over the
evaluations.  ``mtfauc`` first replaces each value by the largest value still
to come, so an incumbent whose true quality gets worse later is charged for
it from the start.
"""
from __future__ import annotations

import numpy as np

__all__ = ["auc", "mtfauc", "normalize", "suffix_max"]

_RULES = ("trapezoid", "sum")


def _values(trace) -> np.ndarray:
    if hasattr(trace, "bsms_true"):
        trace = trace.bsms_true
    values = np.asarray(trace, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("trace is empty")
    return values


def normalize(trace, f_min: float = 0.0):
    """Return ``(normalized, f_max)``; ``normalized`` is ``None`` for a flat trace."""
    values = _values(trace)
    f_max = float(values.max())
    if f_max <= f_min:
        return None, f_max
    return np.clip((values - f_min) / (f_max - f_min), 0.0, 1.0), f_max


def suffix_max(values) -> np.ndarray:
    """``out[i] = max(values[i:])``."""
    values = np.asarray(values, dtype=float)
    return np.maximum.accumulate(values[::-1])[::-1]


def _area(v: np.ndarray, rule: str) -> float:
    if rule == "sum":
        return float(v.sum() / len(v))
    if rule != "trapezoid":
        raise ValueError(f"rule must be one of {_RULES}")
    prev = np.concatenate([v[:1], v[:-1]])
    return float(np.sum(0.5 * (v + prev)) / len(v))


def auc(trace, f_min: float = 0.0, rule: str = "trapezoid") -> float:
    """Mean normalized incumbent value over the evaluations (lower is better)."""
    v, _ = normalize(trace, f_min)
    if v is None:
        return 0.0
    return _area(v, rule)


def mtfauc(trace, f_min: float = 0.0, rule: str = "trapezoid") -> float:
    """Like :func:`auc` but on the suffix maximum, penalizing late degradation."""
    v, _ = normalize(trace, f_min)
    if v is None:
        return 0.0
    return _area(suffix_max(v), rule)
