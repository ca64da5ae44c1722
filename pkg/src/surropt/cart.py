"""Least-squares regression trees grown by greedy binary splitting.

Only what the tree-knot MARS needs: fitting, leaf membership, centroids and
prediction.  No pruning.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "Centroid",
    "Node",
    "RegressionTree",
    "best_split",
    "centroids",
    "fit_tree",
    "terminal_nodes",
]


@dataclass
class Node:
    node_id: int
    depth: int
    members: np.ndarray
    value: float
    split_var: Optional[int] = None
    split_value: Optional[float] = None
    left: Optional["Node"] = None
    right: Optional["Node"] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass(frozen=True)
class Centroid:
    node_id: int
    c: np.ndarray


@dataclass
class RegressionTree:
    root: Node
    n_samples: int
    minsplit: int
    maxdepth: int
    leaves: list = field(default_factory=list)

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty(len(X))
        for i, x in enumerate(X):
            node = self.root
            while not node.is_leaf:
                node = node.left if x[node.split_var] <= node.split_value else node.right
            out[i] = node.value
        return out

    def sse(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(sum(np.sum((y[leaf.members] - leaf.value) ** 2) for leaf in self.leaves))


def best_split(X, y):
    """Return ``(var, cut, sse)`` of the SSE-minimizing binary split, or None.

    Candidate cuts are midpoints between consecutive distinct sorted values.
    Ties go to the lowest variable index, then the smallest cut.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    if n < 2:
        return None
    yc = y - y.mean()
    best = None
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = yc[order]
        valid = xs[:-1] < xs[1:]
        if not valid.any():
            continue
        s1 = np.cumsum(ys)[:-1]
        s2 = np.cumsum(ys**2)[:-1]
        nl = np.arange(1, n)
        nr = n - nl
        tot1 = s1[-1] + ys[-1]
        tot2 = s2[-1] + ys[-1] ** 2
        sse = (s2 - s1**2 / nl) + ((tot2 - s2) - (tot1 - s1) ** 2 / nr)
        sse = np.where(valid, sse, np.inf)
        k = int(np.argmin(sse))
        if best is None or sse[k] < best[2]:
            lo, hi = xs[k], xs[k + 1]
            cut = 0.5 * (lo + hi)
            if not lo <= cut < hi:
                cut = lo
            best = (j, float(cut), float(max(sse[k], 0.0)))
    return best


def fit_tree(X, y, minsplit: int = 20, maxdepth: int = 30, tol: float = 1e-12) -> RegressionTree:
    """Grow a regression tree.

    A node is split only when it has at least ``minsplit`` members, sits above
    ``maxdepth`` and the best split lowers the SSE by more than
    ``tol * max(1, node_sse)``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("fit_tree needs a non-empty 2-D design matrix")
    if len(y) != len(X):
        raise ValueError("X and y lengths differ")

    counter = [0]
    leaves = []

    def grow(members, depth):
        node = Node(counter[0], depth, members, float(np.mean(y[members])))
        counter[0] += 1
        if len(members) >= max(minsplit, 2) and depth < maxdepth:
            node_sse = float(np.sum((y[members] - node.value) ** 2))
            split = best_split(X[members], y[members])
            if split is not None and node_sse - split[2] > tol * max(1.0, node_sse):
                j, cut, _ = split
                go_left = X[members, j] <= cut
                node.split_var, node.split_value = j, cut
                node.left = grow(members[go_left], depth + 1)
                node.right = grow(members[~go_left], depth + 1)
                return node
        leaves.append(node)
        return node

    root = grow(np.arange(len(X)), 0)
    return RegressionTree(root, len(X), minsplit, maxdepth, leaves)


def terminal_nodes(tree: RegressionTree) -> list:
    """Member index arrays of the leaves, left to right."""
    return [leaf.members for leaf in tree.leaves]


def centroids(tree: RegressionTree, X) -> list:
    X = np.asarray(X, dtype=float)
    return [Centroid(leaf.node_id, X[leaf.members].mean(axis=0)) for leaf in tree.leaves]
