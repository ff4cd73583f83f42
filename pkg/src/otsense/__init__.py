"""Optimal-transport global sensitivity indices from given data.

Estimate, for every input column of a sample, how strongly conditioning on
that input separates the output distribution from its marginal — measured
by discrete optimal transport and normalized into [0, 1].
"""
from .data import (BootstrapResult, BootstrapTable, CostMatrix, GroundCost,
                   IndexEstimate, Partitioning, SampleMatrix,
                   SensitivityDataset, SolverConfig, TransportPlan,
                   validate_dataset)
from .errors import DataError, NumericalError, OtsenseError
from .partition import build_partition, default_class_count, partition_all
from .cost import cost_matrix, full_cost_matrix, pairwise_cost, upper_bound
from .solvers import (SolveOutcome, bures_cost, matrix_sqrt_psd, solve_1d,
                      solve_exact, solve_sinkhorn, solve_sinkhorn_stable)
from .estimators import (estimate, irrelevance_threshold, local_separations,
                         ot_indices, ot_indices_1d, ot_indices_smap,
                         ot_indices_wb)
from .bootstrap import bootstrap_indices
from .models import gen_budworm, gen_climate, gen_linear_gaussian

__version__ = "0.1.0"

__all__ = [
    "BootstrapResult", "BootstrapTable", "CostMatrix", "DataError",
    "GroundCost", "IndexEstimate", "NumericalError", "OtsenseError",
    "Partitioning", "SampleMatrix", "SensitivityDataset", "SolveOutcome",
    "SolverConfig", "TransportPlan", "bootstrap_indices", "build_partition",
    "bures_cost", "cost_matrix", "default_class_count", "estimate",
    "full_cost_matrix", "gen_budworm", "gen_climate", "gen_linear_gaussian",
    "irrelevance_threshold", "local_separations", "matrix_sqrt_psd",
    "ot_indices", "ot_indices_1d", "ot_indices_smap", "ot_indices_wb",
    "pairwise_cost", "partition_all", "solve_1d", "solve_exact",
    "solve_sinkhorn", "solve_sinkhorn_stable", "upper_bound", "validate_dataset",
]
