"""Multivariate adaptive regression splines with a pluggable set of eligible knots.

The forward pass adds reflected hinge pairs ``[+(x_j - t)]_+`` and
``[-(x_j - t)]_+`` (times a parent basis when interactions are allowed),
each time picking the pair that lowers the least-squares SSE the most.
Candidate statistics are updated incrementally as the basis grows, so
scoring every candidate costs a few vector operations instead of a refit.

The backward pass removes one basis function at a time, always the one whose
removal gives the lowest GCV, and stops as soon as no removal improves it.

Knot sets come from either :func:`evenly_spaced_knots` (the classic
baseline) or :func:`tk_knots`, which takes, for every regression-tree leaf
and every dimension, the member coordinate nearest to the leaf centroid.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr, solve_triangular

from .cart import RegressionTree, fit_tree

__all__ = [
    "BasisFunction",
    "Hinge",
    "MarsModel",
    "default_max_terms",
    "evenly_spaced_knots",
    "fit_mars",
    "fit_tk_mars",
    "gcv",
    "least_squares_coefficients",
    "predict_mars",
    "selected_variables",
    "tk_knots",
]


@dataclass(frozen=True)
class Hinge:
    var: int
    knot: float
    sign: int

    def __call__(self, X):
        return np.maximum(0.0, self.sign * (X[:, self.var] - self.knot))


@dataclass(frozen=True)
class BasisFunction:
    terms: tuple

    @property
    def degree(self) -> int:
        return len(self.terms)

    @property
    def variables(self) -> frozenset:
        return frozenset(h.var for h in self.terms)

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.ones(len(X))
        for hinge in self.terms:
            out = out * hinge(X)
        return out


@dataclass
class MarsModel:
    intercept: float
    basis: list
    coef: np.ndarray
    max_terms: int
    knots: list
    gcv: float = float("nan")
    forward_sse: list = field(default_factory=list)
    backward_gcv: list = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return len(self.knots)

    def design(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        cols = [np.ones(len(X))] + [b(X) for b in self.basis]
        return np.column_stack(cols)

    def predict(self, X) -> np.ndarray:
        return predict_mars(self, X)


def default_max_terms(n: int) -> int:
    """``floor((2n + 3) / 5)`` with ``n`` the number of training rows."""
    return max((2 * n + 3) // 5, 1)


def gcv(sse: float, n: int, n_basis: int, penalty: float = 3.0) -> float:
    """Generalized cross-validation with ``penalty`` per non-constant basis.

    The effective parameter count is ``(n_basis + 1) + penalty * n_basis``;
    a model that spends all ``n`` degrees of freedom scores ``inf``.
    """
    c = (n_basis + 1) + penalty * n_basis
    if c >= n:
        return float("inf")
    return (sse / n) / (1.0 - c / n) ** 2


def least_squares_coefficients(B, y) -> np.ndarray:
    return np.linalg.lstsq(np.asarray(B, dtype=float), np.asarray(y, dtype=float), rcond=None)[0]


# ---------------------------------------------------------------------------
# eligible knots


def evenly_spaced_knots(X, n_knots: int) -> list:
    """``n_knots`` equally spaced values over each column's observed range."""
    if n_knots < 1:
        raise ValueError("need at least one knot per dimension")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    knots = []
    for lo, hi in zip(X.min(axis=0), X.max(axis=0)):
        knots.append(np.array([lo]) if lo == hi else np.linspace(lo, hi, n_knots))
    return knots


def tk_knots(tree: RegressionTree, X) -> list:
    """Per dimension, the leaf members closest to each leaf centroid.

    Distance ties go to the member with the smallest row index.  Each
    dimension ends up with at most one knot per leaf.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[1]
    chosen = [[] for _ in range(d)]
    for leaf in tree.leaves:
        members = np.sort(leaf.members)
        pts = X[members]
        c = pts.mean(axis=0)
        nearest = np.argmin(np.abs(pts - c), axis=0)
        for j in range(d):
            chosen[j].append(pts[nearest[j], j])
    return [np.unique(k) for k in chosen]


# ---------------------------------------------------------------------------
# fitting


class _Candidates:
    """Hinge-pair candidates with running projection statistics.

    For every candidate column ``b`` the quantities that matter are the
    squared norm of its residual after projecting out the current basis and
    that residual's inner products with its partner column and with the
    response residual.  Adding an orthonormal basis vector ``q`` changes them
    by rank-one corrections in ``a = q' b``, so columns are never re-projected.
    """

    def __init__(self, n):
        self.n = n
        self.info = []  # (parent index or -1, var, knot)
        self.raw = np.empty((n, 0))
        self.raw_norm2 = np.empty(0)
        self.nu = np.empty(0)
        self.nv = np.empty(0)
        self.uv = np.empty(0)
        self.gu = np.empty(0)
        self.gv = np.empty(0)
        self.active = np.empty(0, dtype=bool)

    def extend(self, X, parent_col, parent_idx, exclude_vars, knots, Q, r):
        blocks, info = [], []
        for j, tj in enumerate(knots):
            if j in exclude_vars or len(tj) == 0:
                continue
            diff = X[:, j, None] - tj[None, :]
            pair = np.empty((self.n, 2 * len(tj)))
            pair[:, 0::2] = parent_col[:, None] * np.maximum(0.0, diff)
            pair[:, 1::2] = parent_col[:, None] * np.maximum(0.0, -diff)
            blocks.append(pair)
            info.extend((parent_idx, j, float(t)) for t in tj)
        if not blocks:
            return
        raw = np.hstack(blocks)
        orth = raw - Q @ (Q.T @ raw)
        orth -= Q @ (Q.T @ orth)
        U, V = orth[:, 0::2], orth[:, 1::2]
        self.info.extend(info)
        self.raw = np.hstack([self.raw, raw])
        self.raw_norm2 = np.concatenate([self.raw_norm2, np.sum(raw**2, axis=0)])
        self.nu = np.concatenate([self.nu, np.sum(U * U, axis=0)])
        self.nv = np.concatenate([self.nv, np.sum(V * V, axis=0)])
        self.uv = np.concatenate([self.uv, np.sum(U * V, axis=0)])
        self.gu = np.concatenate([self.gu, U.T @ r])
        self.gv = np.concatenate([self.gv, V.T @ r])
        self.active = np.concatenate([self.active, np.ones(len(info), dtype=bool)])

    def absorb(self, q, rho):
        """Account for a new orthonormal basis vector ``q``; ``rho = q' r``."""
        a = q @ self.raw
        au, av = a[0::2], a[1::2]
        self.nu -= au**2
        self.nv -= av**2
        self.uv -= au * av
        self.gu -= rho * au
        self.gv -= rho * av

    def score(self, room, cond_limit):
        """Best SSE reduction per candidate and which hinge columns it would add."""
        nu, nv, uv, gu, gv = self.nu, self.nv, self.uv, self.gu, self.gv
        # a column is usable if it keeps the cross-product condition below cond_limit
        ok_u = self.active & (nu > self.raw_norm2[0::2] / cond_limit)
        ok_v = self.active & (nv > self.raw_norm2[1::2] / cond_limit)
        with np.errstate(divide="ignore", invalid="ignore"):
            gain_u = np.where(ok_u, gu**2 / nu, -np.inf)
            gain_v = np.where(ok_v, gv**2 / nv, -np.inf)
            det = nu * nv - uv**2
            ok_pair = ok_u & ok_v & (det > nu * nv / cond_limit)
            gain_pair = np.where(ok_pair, (gu**2 * nv - 2 * gu * gv * uv + gv**2 * nu) / det, -np.inf)
        single = np.maximum(gain_u, gain_v)
        pick_u = gain_u >= gain_v
        if room >= 2:
            gain = np.where(ok_pair, gain_pair, single)
        else:
            gain = single
            ok_pair = np.zeros_like(ok_pair)
        return gain, ok_pair, pick_u


def _orthonormal(v, Q):
    for _ in range(2):
        v = v - Q @ (Q.T @ v)
    return v / np.linalg.norm(v)


def fit_mars(
    X,
    y,
    knots,
    max_terms: int | None = None,
    max_degree: int = 1,
    penalty: float = 3.0,
    cond_limit: float = 1e10,
) -> MarsModel:
    """Fit MARS restricted to the eligible ``knots`` (one array per dimension).

    ``max_terms`` caps the number of non-constant basis functions and
    defaults to :func:`default_max_terms`.  A candidate column is rejected
    when its squared residual norm after projection on the current basis is
    below ``1/cond_limit`` of its raw squared norm.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    if n < 2:
        raise ValueError("MARS needs at least two rows")
    if len(y) != n:
        raise ValueError("X and y lengths differ")
    if len(knots) != d:
        raise ValueError(f"expected knot arrays for {d} dimensions, got {len(knots)}")
    knots = [np.unique(np.asarray(k, dtype=float)) for k in knots]
    if max_terms is None:
        max_terms = default_max_terms(n)

    # forward pass
    Q = np.ones((n, 1)) / np.sqrt(n)
    r = y - y.mean()
    sst = float(r @ r)
    basis, columns = [], []
    cands = _Candidates(n)
    cands.extend(X, np.ones(n), -1, frozenset(), knots, Q, r)
    forward_sse = [sst]

    while len(basis) < max_terms and sst > 0 and cands.active.any():
        gain, ok_pair, pick_u = cands.score(max_terms - len(basis), cond_limit)
        k = int(np.argmax(gain))
        if not np.isfinite(gain[k]) or gain[k] <= 1e-12 * sst:
            break
        parent_idx, j, t = cands.info[k]
        parent_terms = () if parent_idx < 0 else basis[parent_idx].terms
        if ok_pair[k]:
            picks = [(0, +1), (1, -1)]
        else:
            picks = [(0, +1)] if pick_u[k] else [(1, -1)]
        cands.active[k] = False
        for offset, sign in picks:
            col = cands.raw[:, 2 * k + offset].copy()
            q = _orthonormal(col, Q)
            rho = float(q @ r)
            Q = np.column_stack([Q, q])
            r = r - rho * q
            cands.absorb(q, rho)
            bf = BasisFunction(parent_terms + (Hinge(j, t, sign),))
            basis.append(bf)
            columns.append(col)
            if bf.degree < max_degree:
                cands.extend(X, col, len(basis) - 1, bf.variables, knots, Q, r)
        forward_sse.append(float(r @ r))

    # backward pass
    D = np.column_stack([np.ones(n)] + columns)
    keep, model_gcv, history = _backward(D, y, penalty)
    coef = least_squares_coefficients(D[:, keep], y)
    kept = [basis[i - 1] for i in keep[1:]]
    return MarsModel(
        intercept=float(coef[0]),
        basis=kept,
        coef=np.asarray(coef[1:], dtype=float),
        max_terms=max_terms,
        knots=knots,
        gcv=model_gcv,
        forward_sse=forward_sse,
        backward_gcv=history,
    )


def _backward(D, y, penalty):
    n, p = D.shape
    Qf, Rf = qr(D, mode="economic")
    z = Qf.T @ y
    resid0 = float(np.sum((y - Qf @ z) ** 2))

    def solve(subset):
        q, rr = qr(Rf[:, subset], mode="economic")
        w = q.T @ z
        sse = resid0 + float(np.sum((z - q @ w) ** 2))
        return q, rr, w, sse

    keep = list(range(p))
    _, rr, w, sse = solve(keep)
    current = gcv(sse, n, len(keep) - 1, penalty)
    history = [current]
    while len(keep) > 1:
        beta = solve_triangular(rr, w)
        rinv = solve_triangular(rr, np.eye(len(keep)))
        diag = np.sum(rinv**2, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            delta = np.where(diag > 0, beta**2 / diag, np.inf)
        scores = np.array([gcv(sse + delta[i], n, len(keep) - 2, penalty) for i in range(1, len(keep))])
        i = int(np.argmin(scores))
        if not (scores[i] < current or np.isinf(current)):
            break
        del keep[i + 1]
        _, rr, w, sse = solve(keep)
        current = gcv(sse, n, len(keep) - 1, penalty)
        history.append(current)
    return keep, current, history


def predict_mars(model: MarsModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.n_features:
        raise ValueError(f"model expects {model.n_features} features, got {X.shape[1]}")
    out = np.full(len(X), model.intercept)
    for b, c in zip(model.basis, model.coef):
        out += c * b(X)
    return out


def selected_variables(model: MarsModel) -> set:
    """Indices (0-based) of the variables used by any surviving basis function."""
    out = set()
    for b in model.basis:
        out |= b.variables
    return out


def fit_tk_mars(X, y, minsplit: int = 20, maxdepth: int = 30, **kwargs):
    """Tree-knot MARS: knots from a regression tree, then :func:`fit_mars`.

    Returns ``(model, tree)``; the tree's leaf centroids feed the candidate pool.
    """
    tree = fit_tree(X, y, minsplit=minsplit, maxdepth=maxdepth)
    return fit_mars(X, y, tk_knots(tree, X), **kwargs), tree
