"""How the three evaluation policies spend a budget when outputs are noisy."""
import numpy as np

from surropt import ExperimentConfig, mtfauc, run

for noise in (0.0, 0.25):
    print(f"noise level {noise}")
    for policy in ("none", "fixed", "smart"):
        scores, samples = [], []
        for seed in range(3):
            cfg = ExperimentConfig(function="levy", d=6, fiv=1.0, noise=noise, surrogate="rbf",
                                   replication=policy, r=5, budget=200, seed=seed)
            trace = run(cfg)
            scores.append(mtfauc(trace))
            samples.append(np.mean(trace.metadata["replications"][cfg.n_initial:]))
        print(f"  {policy:>5}: samples per candidate {np.mean(samples):4.2f}, mtfauc {np.mean(scores):.3f}")
