"""Independent reference implementations used to check the library.

Each one takes a deliberately different route from the code under test:
exhaustive loops instead of cumulative sums, explicit inverses instead of
factorizations, numerical quadrature instead of special functions.
"""
import math

import numpy as np
from scipy import integrate, optimize
from scipy.special import gammaln


def brute_force_split(X, y):
    """Best ``(var, cut, sse)`` by trying every midpoint cut in every dimension."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    best = None
    for j in range(X.shape[1]):
        values = sorted(set(X[:, j].tolist()))
        for lo, hi in zip(values[:-1], values[1:]):
            cut = (lo + hi) / 2
            left = y[X[:, j] <= cut]
            right = y[X[:, j] > cut]
            sse = sum((v - left.mean()) ** 2 for v in left) + sum((v - right.mean()) ** 2 for v in right)
            if best is None or sse < best[2] - 1e-9 * max(1.0, abs(best[2])):
                best = (j, cut, sse)
    return best


def brute_force_front(pred, dist):
    keep = []
    for i in range(len(pred)):
        dominated = False
        for k in range(len(pred)):
            if k == i:
                continue
            if pred[k] <= pred[i] and dist[k] >= dist[i] and (pred[k] < pred[i] or dist[k] > dist[i]):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def normal_equation_fit(B, y):
    """Intercept plus coefficients from ``(A'A) beta = A'y`` with an explicit inverse."""
    A = np.column_stack([np.ones(len(y)), B])
    return np.linalg.inv(A.T @ A) @ (A.T @ y)


def dense_rbf_predict(X, y, x_new, omega=2.0, ridge=0.0):
    """Multiquadric interpolant built and solved with plain loops and ``inv``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, d = X.shape
    size = n + d + 1
    A = np.zeros((size, size))
    for i in range(n):
        for k in range(n):
            A[i, k] = math.sqrt(sum((X[i] - X[k]) ** 2) + omega**2) - (ridge if i == k else 0.0)
        A[i, n] = A[n, i] = 1.0
        for j in range(d):
            A[i, n + 1 + j] = A[n + 1 + j, i] = X[i, j]
    sol = np.linalg.inv(A) @ np.concatenate([y, np.zeros(d + 1)])
    lam, c = sol[:n], sol[n:]
    x_new = np.asarray(x_new, dtype=float)
    phi = [math.sqrt(sum((x_new - X[i]) ** 2) + omega**2) for i in range(n)]
    return float(np.dot(phi, lam) + c[0] + np.dot(c[1:], x_new))


def gp_posterior(X, y, x_new, amplitude, length_scale, noise):
    """Posterior mean and variance from the textbook formulas with ``inv``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))

    def k(a, b):
        return amplitude**2 * math.exp(-sum((a - b) ** 2) / (2 * length_scale**2))

    n = len(X)
    K = np.array([[k(X[i], X[j]) for j in range(n)] for i in range(n)]) + noise**2 * np.eye(n)
    ks = np.array([k(X[i], np.asarray(x_new, dtype=float)) for i in range(n)])
    Kinv = np.linalg.inv(K)
    return float(ks @ Kinv @ y), float(amplitude**2 - ks @ Kinv @ ks)


def t_pdf(u, df):
    logc = gammaln((df + 1) / 2) - gammaln(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(logc - (df + 1) / 2 * math.log1p(u * u / df))


def t_cdf(x, df):
    # integrate from the center outward; the pdf is symmetric
    area, _ = integrate.quad(t_pdf, 0.0, abs(x), args=(df,), limit=200, epsabs=1e-13)
    return 0.5 + math.copysign(area, x)


def t_quantile_by_quadrature(p, df):
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -t_quantile_by_quadrature(1 - p, df)
    hi = 1.0
    while t_cdf(hi, df) < p:
        hi *= 2
    return optimize.brentq(lambda x: t_cdf(x, df) - p, 0.0, hi, xtol=1e-12)


def naive_suffix_max(values):
    return [max(values[i:]) for i in range(len(values))]


def hand_trapezoid(values):
    total = 0.0
    prev = values[0]
    for v in values:
        total += (v + prev) / 2
        prev = v
    return total / len(values)
