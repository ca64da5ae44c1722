"""Half of the inputs are inert; the fitted spline model mostly ignores them."""
from surropt import ExperimentConfig, run

cfg = ExperimentConfig(function="rosenbrock", d=20, fiv=0.5, surrogate="tkmars", budget=250, seed=11)
trace = run(cfg)
chosen = sorted(trace.selected_variables or [])
m = 10
print("selected:", chosen)
print(f"important picked: {sum(v < m for v in chosen)}/{m}")
print(f"inert picked:     {sum(v >= m for v in chosen)}/{cfg.d - m}")
