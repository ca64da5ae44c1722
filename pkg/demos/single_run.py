"""One optimization run of Rosenbrock in 10-d, printed as it converges."""
import numpy as np

from surropt import ExperimentConfig, auc, mtfauc, run

cfg = ExperimentConfig(function="rosenbrock", d=10, fiv=1.0, surrogate="tkmars", budget=200, seed=3)
trace = run(cfg)

# the incumbent's true value every 20 evaluations
for e in trace.entries[::20]:
    print(f"{e.eval_index:4d}  {e.bsms_true:12.3f}")
print("final point:", np.round(trace.final_x, 2))
print(f"auc {auc(trace):.3f}  mtfauc {mtfauc(trace):.3f}")
print("variables in the final model:", sorted(trace.selected_variables or []))
print("fallback iterations:", len(trace.metadata["fallbacks"]))
