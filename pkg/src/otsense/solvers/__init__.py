"""Discrete optimal-transport solvers.

Four interchangeable routes to the transport cost between two discrete
measures: an exact transportation simplex, entropic Sinkhorn iterations in
plain and log-stabilized form, a sorted-sample rule for scalar outputs, and
the closed-form Gaussian (Wasserstein-Bures) cost.
"""
from .outcome import SolveOutcome
from .exact import solve_exact
from .sinkhorn import solve_sinkhorn, solve_sinkhorn_stable
from .oned import solve_1d
from .bures import bures_cost, matrix_sqrt_psd

__all__ = [
    "SolveOutcome",
    "solve_exact",
    "solve_sinkhorn",
    "solve_sinkhorn_stable",
    "solve_1d",
    "bures_cost",
    "matrix_sqrt_psd",
]
