"""Where tree-based knots land compared with an even grid, and what it buys."""
import numpy as np

from surropt.cart import fit_tree
from surropt.mars import evenly_spaced_knots, fit_mars, predict_mars, tk_knots

rng = np.random.default_rng(0)

# a 1-d response with a sharp bend near 0.8 and flat elsewhere
X = rng.uniform(-5, 10, (60, 1))
y = np.where(X[:, 0] > 0.8, (X[:, 0] - 0.8) ** 2, 0.0) + 0.05 * rng.normal(size=60)

tree = fit_tree(X, y, minsplit=10)
print("leaves:", len(tree.leaves))
print("tree knots:", np.round(tk_knots(tree, X)[0], 2))
print("even knots:", np.round(evenly_spaced_knots(X, len(tree.leaves))[0], 2))

grid = np.linspace(-5, 10, 400)[:, None]
truth = np.where(grid[:, 0] > 0.8, (grid[:, 0] - 0.8) ** 2, 0.0)
for label, knots in [("tree", tk_knots(tree, X)), ("even", evenly_spaced_knots(X, len(tree.leaves)))]:
    model = fit_mars(X, y, knots)
    rmse = np.sqrt(np.mean((predict_mars(model, grid) - truth) ** 2))
    print(f"{label:>5} knots: {len(model.basis)} basis functions, rmse {rmse:.3f}")
