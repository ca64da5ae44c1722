"""Exploration/exploitation Pareto sampling of candidate points from a pool.

Each pool point is scored by its predicted value (to minimize) and by its
distance to the nearest evaluated point (to maximize).  From the
non-dominated set the lowest prediction is taken first; the rest are picked
one at a time by maximin distance to everything evaluated or already picked.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

__all__ = ["augment_pool", "eepa_select", "maximin_select", "min_distances", "pareto_front"]


def min_distances(points, reference) -> np.ndarray:
    """Euclidean distance from each row of ``points`` to its nearest ``reference`` row."""
    points = np.atleast_2d(points)
    reference = np.atleast_2d(reference)
    if reference.size == 0:
        return np.full(len(points), np.inf)
    return cdist(points, reference).min(axis=1)


def pareto_front(predicted, distance) -> np.ndarray:
    """Indices of the non-dominated candidates, in ascending index order.

    ``a`` dominates ``b`` when ``pred[a] <= pred[b]`` and ``dist[a] >= dist[b]``
    with at least one strict inequality; candidates with identical scores do
    not dominate each other.
    """
    pred = np.asarray(predicted, dtype=float)
    dist = np.asarray(distance, dtype=float)
    n = len(pred)
    if n == 0:
        return np.empty(0, dtype=int)
    order = np.lexsort((-dist, pred))
    keep = np.zeros(n, dtype=bool)
    best_dist = -np.inf  # max distance among strictly smaller predictions
    i = 0
    while i < n:
        j = i
        while j < n and pred[order[j]] == pred[order[i]]:
            j += 1
        group = order[i:j]
        top = dist[group[0]]
        if top > best_dist:
            keep[group[dist[group] == top]] = True
        best_dist = max(best_dist, top)
        i = j
    return np.flatnonzero(keep)


def maximin_select(front_points, front_pred, evaluated, k: int) -> list:
    """Order-of-selection indices into ``front_points`` (at most ``k``).

    The first pick has the lowest prediction; each later pick maximizes the
    distance to the evaluated points plus everything picked so far.
    """
    front_points = np.atleast_2d(np.asarray(front_points, dtype=float))
    front_pred = np.asarray(front_pred, dtype=float)
    if k < 1 or len(front_points) == 0:
        return []
    chosen = [int(np.argmin(front_pred))]
    evaluated = np.asarray(evaluated, dtype=float).reshape(-1, front_points.shape[1])
    dist = min_distances(front_points, evaluated)
    while len(chosen) < min(k, len(front_points)):
        dist = np.minimum(dist, cdist(front_points, front_points[chosen[-1:]])[:, 0])
        dist[chosen] = -np.inf
        best = int(np.argmax(dist))
        if not dist[best] > 0:
            break  # only copies of evaluated or chosen points remain
        chosen.append(best)
    return chosen


def eepa_select(pool, evaluated, predicted, k: int = 3) -> np.ndarray:
    """Pool indices of up to ``k`` new candidates.

    Pool points that coincide with an evaluated point are never returned.
    """
    pool = np.atleast_2d(np.asarray(pool, dtype=float))
    predicted = np.asarray(predicted, dtype=float)
    delta = min_distances(pool, evaluated)
    fresh = np.flatnonzero(delta > 0)
    if len(fresh) == 0:
        return np.empty(0, dtype=int)
    front = fresh[pareto_front(predicted[fresh], delta[fresh])]
    picks = maximin_select(pool[front], predicted[front], evaluated, k)
    return front[picks]


def augment_pool(pool, extra) -> np.ndarray:
    """Append rows of ``extra`` that are not already in ``pool`` (exact match)."""
    pool = np.atleast_2d(np.asarray(pool, dtype=float))
    extra = np.asarray(extra, dtype=float).reshape(-1, pool.shape[1])
    seen = {row.tobytes() for row in pool}
    new = []
    for row in extra:
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            new.append(row)
    if not new:
        return pool
    return np.vstack([pool, np.array(new)])
