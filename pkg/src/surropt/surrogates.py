"""Uniform fit/predict wrappers around the surrogate models.

Every surrogate exposes ``fit(X, y)`` (returning itself), ``predict(X)``,
``selected_variables()`` (``None`` when the notion does not apply) and
``centroids()`` (extra pool points, empty unless the model grows a tree).
"""
from __future__ import annotations

import inspect

import numpy as np

from . import kernels
from .cart import centroids as leaf_centroids
from .cart import fit_tree
from .mars import evenly_spaced_knots, fit_mars, fit_tk_mars, predict_mars, selected_variables

__all__ = ["GpSurrogate", "MarsSurrogate", "NonRbfSurrogate", "RbfSurrogate", "SURROGATES",
           "TkMarsSurrogate", "make_surrogate"]

_EMPTY = np.empty((0, 0))


class _Base:
    name = ""
    uses_replicates = False

    def __init__(self):
        self.model = None

    def fit(self, X, y):
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        if self.model is None:
            raise RuntimeError(f"{self.name} surrogate has not been fitted")
        return self._predict(np.atleast_2d(np.asarray(X, dtype=float)))

    def selected_variables(self):
        return None

    def centroids(self) -> np.ndarray:
        return _EMPTY


class MarsSurrogate(_Base):
    """MARS over evenly spaced knots.

    ``knots`` is the number of knots per dimension, or ``"leaves"`` to use as
    many knots as a regression tree on the same data has leaves.
    """

    name = "mars"
    uses_replicates = True

    def __init__(self, knots=20, max_terms=None, max_degree=1, minsplit=20, maxdepth=30):
        super().__init__()
        if knots != "leaves" and int(knots) < 1:
            raise ValueError("knot count must be positive or 'leaves'")
        self.knots = knots
        self.max_terms = max_terms
        self.max_degree = max_degree
        self.minsplit = minsplit
        self.maxdepth = maxdepth

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        if self.knots == "leaves":
            count = len(fit_tree(X, y, self.minsplit, self.maxdepth).leaves)
        else:
            count = int(self.knots)
        self.model = fit_mars(X, y, evenly_spaced_knots(X, count),
                              max_terms=self.max_terms, max_degree=self.max_degree)
        return self

    def _predict(self, X):
        return predict_mars(self.model, X)

    def selected_variables(self):
        return selected_variables(self.model)


class TkMarsSurrogate(MarsSurrogate):
    """MARS with knots taken from regression-tree leaves."""

    name = "tkmars"

    def __init__(self, max_terms=None, max_degree=1, minsplit=20, maxdepth=30):
        super().__init__(knots=1, max_terms=max_terms, max_degree=max_degree,
                         minsplit=minsplit, maxdepth=maxdepth)
        self.tree = None
        self._centroids = _EMPTY

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        self.model, self.tree = fit_tk_mars(X, y, self.minsplit, self.maxdepth,
                                            max_terms=self.max_terms, max_degree=self.max_degree)
        self._centroids = np.array([c.c for c in leaf_centroids(self.tree, X)])
        return self

    def centroids(self):
        return self._centroids


class RbfSurrogate(_Base):
    name = "rbf"

    def __init__(self, omega=2.0):
        super().__init__()
        self.omega = omega

    def fit(self, X, y):
        self.model = kernels.fit_rbf(X, y, self.omega)
        return self

    def _predict(self, X):
        return kernels.predict_rbf(self.model, X)


class NonRbfSurrogate(RbfSurrogate):
    name = "nonrbf"

    def __init__(self, omega=2.0, eta=1e-4):
        super().__init__(omega)
        self.eta = eta

    def fit(self, X, y):
        self.model = kernels.fit_nonrbf(X, y, self.omega, self.eta)
        return self


class GpSurrogate(_Base):
    """GP on standardized outputs.

    With ``tune=True`` the length scale and noise are picked by grid
    cross-validation on the first fit and once more when the training set
    first reaches ``retune_at`` rows; otherwise ``kernel`` is used as given.
    """

    name = "gp"

    def __init__(self, kernel=None, tune=True, retune_at=500):
        super().__init__()
        self.kernel = kernel or kernels.GpKernel()
        self.tune = tune
        self.retune_at = retune_at
        self._tuned_at = None
        self._shift = 0.0
        self._scale = 1.0

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self._shift = float(y.mean())
        self._scale = float(y.std()) or 1.0
        z = (y - self._shift) / self._scale
        if self.tune and (self._tuned_at is None or
                          (self._tuned_at < self.retune_at <= len(X))):
            self.kernel = kernels.cv_gp_hyperparameters(X, z, amplitude=self.kernel.amplitude)
            self._tuned_at = len(X)
        self.model = kernels.fit_gp(X, z, self.kernel)
        return self

    def _predict(self, X):
        return self._shift + self._scale * kernels.predict_gp(self.model, X)[0]


SURROGATES = {
    "mars": MarsSurrogate,
    "tkmars": TkMarsSurrogate,
    "rbf": RbfSurrogate,
    "nonrbf": NonRbfSurrogate,
    "gp": GpSurrogate,
}


def make_surrogate(name: str, **options):
    """Build a surrogate by name, passing only the options it understands."""
    try:
        cls = SURROGATES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown surrogate {name!r}; choose from {sorted(SURROGATES)}") from None
    accepted = inspect.signature(cls.__init__).parameters
    return cls(**{k: v for k, v in options.items() if k in accepted and v is not None})
