"""Surrogate-based optimization of noisy black boxes with tree-knot MARS."""
from .cart import fit_tree
from .doe import lhd, uniform_pool
from .kernels import fit_gp, fit_nonrbf, fit_rbf
from .mars import fit_mars, fit_tk_mars, predict_mars, selected_variables
from .metrics import auc, mtfauc
from .optimizer import ExperimentConfig, RunTrace, run
from .problem import FUNCTIONS, Budget, NoisyObjective, TestFunction, eval_noisy, eval_true
from .sampling import eepa_select, pareto_front
from .surrogates import make_surrogate

__all__ = [
    "Budget",
    "ExperimentConfig",
    "FUNCTIONS",
    "NoisyObjective",
    "RunTrace",
    "TestFunction",
    "auc",
    "eepa_select",
    "eval_noisy",
    "eval_true",
    "fit_gp",
    "fit_mars",
    "fit_nonrbf",
    "fit_rbf",
    "fit_tk_mars",
    "fit_tree",
    "lhd",
    "make_surrogate",
    "mtfauc",
    "pareto_front",
    "predict_mars",
    "run",
    "selected_variables",
    "uniform_pool",
]
