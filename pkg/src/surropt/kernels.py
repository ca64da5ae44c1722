"""Kernel surrogates: multiquadric RBF (interpolating and smoothed) and a GP.

Non-interpolating RBF
---------------------
The smoothed fit trades the native-space semi-norm of the interpolant
against the squared residuals,

    minimize  eta * |S|^2 + (1 - eta) * ||e||^2,   e = Phi lam + P c - y,
    subject to P' lam = 0.

The multiquadric kernel is conditionally *negative* definite of order one,
so on the constraint set ``lam' Phi lam <= 0`` and the semi-norm is
``|S|^2 = -lam' Phi lam``.  Setting the gradient to zero gives
``e = mu * lam`` with ``mu = eta / (1 - eta)``, i.e. the interpolation system
with ``Phi`` replaced by ``Phi - mu I``.  Because ``-Phi`` is positive
definite on ``P' lam = 0`` the objective is convex there and this stationary
point is its minimizer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.spatial.distance import cdist

__all__ = [
    "FitError",
    "GpKernel",
    "GpModel",
    "RbfModel",
    "average_duplicates",
    "cv_gp_hyperparameters",
    "fit_gp",
    "fit_nonrbf",
    "fit_rbf",
    "nonrbf_objective",
    "predict_gp",
    "predict_rbf",
    "semi_norm",
]


class FitError(RuntimeError):
    """A surrogate could not be fitted (singular or indefinite system)."""


def average_duplicates(X, y):
    """Collapse rows with identical coordinates, averaging their responses."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if len(X) != len(y):
        raise ValueError("X and y lengths differ")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("training data must be finite")
    uniq, first, inverse = np.unique(X, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    if len(uniq) == len(X):
        return X, y
    sums = np.bincount(inverse, weights=y, minlength=len(uniq))
    counts = np.bincount(inverse, minlength=len(uniq))
    # keep first-occurrence order so fits do not depend on lexicographic sorting
    order = np.argsort(first, kind="stable")
    return uniq[order], (sums / counts)[order]


def multiquadric(r, omega):
    return np.sqrt(r**2 + omega**2)


@dataclass(frozen=True)
class RbfModel:
    centers: np.ndarray
    lam: np.ndarray
    poly: np.ndarray  # [c0, c1..cd] for p(x) = c0 + c . x
    omega: float
    mu: float = 0.0

    def predict(self, X) -> np.ndarray:
        return predict_rbf(self, X)


def _solve_rbf(X, y, omega, ridge):
    n, d = X.shape
    phi = multiquadric(cdist(X, X), omega)
    if ridge:
        phi = phi - ridge * np.eye(n)
    P = np.hstack([np.ones((n, 1)), X])
    if np.linalg.matrix_rank(P) < d + 1:
        # too few or coplanar centers to pin down a linear tail; keep a constant
        P = P[:, :1]
    m = P.shape[1]
    A = np.zeros((n + m, n + m))
    A[:n, :n] = phi
    A[:n, n:] = P
    A[n:, :n] = P.T
    rhs = np.concatenate([y, np.zeros(m)])
    try:
        sol = linalg.solve(A, rhs, assume_a="sym")
    except (linalg.LinAlgError, ValueError) as exc:
        raise FitError(f"RBF system is singular: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise FitError("RBF system produced non-finite coefficients")
    poly = np.zeros(d + 1)
    poly[:m] = sol[n:]
    return sol[:n], poly


def fit_rbf(X, y, omega: float = 2.0) -> RbfModel:
    """Multiquadric interpolant with a linear polynomial tail."""
    X, y = average_duplicates(X, y)
    lam, poly = _solve_rbf(X, y, omega, 0.0)
    return RbfModel(X, lam, poly, omega)


def fit_nonrbf(X, y, omega: float = 2.0, eta: float = 1e-4) -> RbfModel:
    """Smoothed multiquadric fit; see the module docstring for the derivation."""
    if not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    X, y = average_duplicates(X, y)
    mu = eta / (1.0 - eta)
    lam, poly = _solve_rbf(X, y, omega, mu)
    return RbfModel(X, lam, poly, omega, mu)


def predict_rbf(model: RbfModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.centers.shape[1]:
        raise ValueError(f"model expects {model.centers.shape[1]} features, got {X.shape[1]}")
    phi = multiquadric(cdist(X, model.centers), model.omega)
    return phi @ model.lam + model.poly[0] + X @ model.poly[1:]


def semi_norm(model: RbfModel) -> float:
    """``-lam' Phi lam``, nonnegative for multiquadrics under ``P' lam = 0``."""
    phi = multiquadric(cdist(model.centers, model.centers), model.omega)
    return float(-model.lam @ phi @ model.lam)


def nonrbf_objective(X, y, lam, poly, omega, eta) -> float:
    """Weighted smoothness-plus-misfit objective minimized by :func:`fit_nonrbf`."""
    phi = multiquadric(cdist(X, X), omega)
    fitted = phi @ lam + poly[0] + X @ poly[1:]
    return float(eta * (-lam @ phi @ lam) + (1.0 - eta) * np.sum((fitted - y) ** 2))


# ---------------------------------------------------------------------------
# Gaussian process


@dataclass(frozen=True)
class GpKernel:
    """Squared-exponential covariance ``amplitude**2 * exp(-|x-x'|^2 / (2 length_scale**2))``
    plus i.i.d. observation noise with standard deviation ``noise``."""

    amplitude: float = 1.0
    length_scale: float = 1.0
    noise: float = 1e-3

    def __call__(self, A, B) -> np.ndarray:
        sq = cdist(A, B, "sqeuclidean")
        return self.amplitude**2 * np.exp(-0.5 * sq / self.length_scale**2)


@dataclass(frozen=True)
class GpModel:
    X: np.ndarray
    alpha: np.ndarray
    chol: np.ndarray
    kernel: GpKernel

    def predict(self, X) -> np.ndarray:
        return predict_gp(self, X)[0]


def fit_gp(X, y, kernel: GpKernel = GpKernel()) -> GpModel:
    """Zero-mean GP posterior given noisy observations ``y`` at ``X``."""
    if min(kernel.amplitude, kernel.length_scale) <= 0 or kernel.noise < 0:
        raise ValueError("GP hyperparameters must be positive")
    X, y = average_duplicates(X, y)
    K = kernel(X, X) + kernel.noise**2 * np.eye(len(X))
    K[np.diag_indices_from(K)] += 1e-10 * np.trace(K) / len(X)
    try:
        chol = linalg.cholesky(K, lower=True)
    except linalg.LinAlgError as exc:
        raise FitError(f"GP covariance is not positive definite: {exc}") from exc
    alpha = linalg.cho_solve((chol, True), y)
    return GpModel(X, alpha, chol, kernel)


def predict_gp(model: GpModel, X):
    """Posterior mean and variance at the rows of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.X.shape[1]:
        raise ValueError(f"model expects {model.X.shape[1]} features, got {X.shape[1]}")
    ks = model.kernel(model.X, X)
    mean = ks.T @ model.alpha
    v = linalg.solve_triangular(model.chol, ks, lower=True)
    var = model.kernel.amplitude**2 - np.sum(v**2, axis=0)
    return mean, np.where(var < 0, 0.0, var)


def cv_gp_hyperparameters(
    X,
    y,
    length_scales=None,
    noises=(1e-6, 1e-3, 1e-2, 1e-1),
    amplitude: float = 1.0,
    folds: int = 5,
    rng: np.random.Generator | None = None,
) -> GpKernel:
    """Pick ``(length_scale, noise)`` from a log grid by k-fold prediction error.

    ``y`` is expected on a standardized scale (the amplitude stays fixed).
    The default length-scale grid spans 0.05 to 2 times the data diameter.
    """
    X, y = average_duplicates(X, y)
    n = len(X)
    if length_scales is None:
        diameter = float(np.linalg.norm(X.max(axis=0) - X.min(axis=0))) or 1.0
        length_scales = diameter * np.logspace(np.log10(0.05), np.log10(2.0), 8)
    rng = rng or np.random.default_rng(0)
    folds = max(2, min(folds, n))
    assignment = rng.permutation(n) % folds
    best, best_err = GpKernel(amplitude, float(length_scales[0]), float(noises[0])), np.inf
    for ls in length_scales:
        for noise in noises:
            kernel = GpKernel(amplitude, float(ls), float(noise))
            err = 0.0
            try:
                for k in range(folds):
                    test = assignment == k
                    model = fit_gp(X[~test], y[~test], kernel)
                    err += float(np.sum((model.predict(X[test]) - y[test]) ** 2))
            except FitError:
                continue
            if err < best_err:
                best, best_err = kernel, err
    return best
