"""Validation behaviour of the core containers."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otsense import (DataError, GroundCost, SampleMatrix, SensitivityDataset,
                     SolverConfig, validate_dataset)
from otsense.data import BootstrapTable, IndexEstimate, TransportPlan


def test_sample_matrix_promotes_vector_to_column():
    m = SampleMatrix(np.arange(4.0), ("a",))
    assert m.values.shape == (4, 1)
    assert m.n == 4 and m.cols == 1


def test_sample_matrix_generates_prefixed_names():
    m = SampleMatrix(np.zeros((3, 2)), prefix="Y")
    assert m.names == ("Y1", "Y2")


def test_sample_matrix_rejects_single_row():
    with pytest.raises(DataError, match="at least 2"):
        SampleMatrix(np.zeros((1, 2)), ("a", "b"))


def test_sample_matrix_rejects_duplicate_names():
    with pytest.raises(DataError, match="duplicate"):
        SampleMatrix(np.zeros((3, 2)), ("a", "a"))


def test_sample_matrix_names_length_must_match():
    with pytest.raises(DataError):
        SampleMatrix(np.zeros((3, 2)), ("a",))


def test_sample_matrix_reports_nonfinite_position():
    vals = np.zeros((4, 3))
    vals[2, 1] = np.nan
    with pytest.raises(DataError) as exc:
        SampleMatrix(vals, ("a", "b", "c"))
    assert "row 3" in str(exc.value) and "'b'" in str(exc.value)


def test_sample_matrix_values_are_frozen():
    m = SampleMatrix(np.zeros((3, 2)), ("a", "b"))
    with pytest.raises(ValueError):
        m.values[0, 0] = 1.0


def test_dataset_requires_matching_row_counts():
    x = SampleMatrix(np.zeros((3, 1)), ("x",))
    y = SampleMatrix(np.zeros((4, 1)), ("y",))
    with pytest.raises(DataError, match="rows"):
        SensitivityDataset(x, y)


def test_dataset_rejects_shared_names_across_sides():
    x = SampleMatrix(np.zeros((3, 1)), ("v",))
    y = SampleMatrix(np.ones((3, 1)), ("v",))
    with pytest.raises(DataError, match="both"):
        SensitivityDataset(x, y)


def test_validate_dataset_wraps_arrays():
    ds = validate_dataset(np.random.default_rng(0).standard_normal((5, 2)),
                          np.arange(5.0))
    assert ds.n == 5 and ds.d == 2 and ds.k == 1


def test_ground_cost_factories():
    assert GroundCost.sq_euclidean().kind == "sq-euclidean"
    mk = GroundCost.minkowski_power(3.0, 3.0)
    assert (mk.p, mk.q) == (3.0, 3.0)
    cu = GroundCost.custom(lambda a, b: np.zeros((len(a), len(b))))
    assert cu.kind == "custom"


def test_ground_cost_rejects_bad_exponent():
    with pytest.raises(DataError):
        GroundCost.minkowski_power(0.5, 2.0)


def test_solver_config_rejects_unknown_solver():
    with pytest.raises(DataError, match="solver"):
        SolverConfig("simplex")


def test_solver_config_rejects_nonpositive_epsilon():
    with pytest.raises(DataError):
        SolverConfig("sinkhorn", epsilon=0.0)


@given(st.integers(min_value=1, max_value=200))
@settings(deadline=None)
def test_solver_config_accepts_any_positive_budget(budget):
    cfg = SolverConfig("sinkhorn", epsilon=0.5, num_iterations=budget)
    assert cfg.num_iterations == budget


def test_transport_plan_checks_marginals():
    P = np.full((2, 2), 0.25)
    TransportPlan(P, np.full(2, 0.5), np.full(2, 0.5))  # feasible
    with pytest.raises(DataError, match="marginal"):
        TransportPlan(P, np.array([0.9, 0.1]), np.full(2, 0.5))


def test_bootstrap_table_orders_interval():
    with pytest.raises(DataError):
        BootstrapTable(original=np.zeros(1), bias=np.zeros(1),
                       ci_low=np.ones(1), ci_high=np.zeros(1))


def test_index_estimate_rejects_negative_exact_indices():
    with pytest.raises(DataError, match="negative"):
        IndexEstimate(method="exact", input_names=("a",),
                      indices=np.array([-0.01]), bound=1.0,
                      separations=np.zeros((1, 2)),
                      representatives=np.zeros((1, 2)))


def test_index_estimate_checks_wb_component_identity():
    with pytest.raises(DataError, match="advective"):
        IndexEstimate(method="wass-bures", input_names=("a",),
                      indices=np.array([0.5]), bound=1.0,
                      separations=np.zeros((1, 2)),
                      representatives=np.zeros((1, 2)),
                      components={"advective": np.array([0.1]),
                                  "diffusive": np.array([0.1])})
