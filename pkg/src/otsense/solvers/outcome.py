"""Common result type returned by every transport solver."""
from __future__ import annotations

from dataclasses import dataclass

from ..data import TransportPlan


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    """What a solver produced.

    ``cost`` is the (unregularized) transport cost ``<P, C>``.  Entropic
    solvers additionally report the regularized objective and their achieved
    L1 marginal error; ``iterations`` counts Sinkhorn sweeps or simplex
    pivots.  ``converged`` is always True for exact solves.
    """

    cost: float
    plan: TransportPlan | None = None
    iterations: int = 0
    marginal_err: float = 0.0
    converged: bool = True
    regularized_cost: float | None = None
