"""Equal-frequency partitioning properties."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otsense import DataError, SampleMatrix, build_partition, partition_all
from otsense.partition import default_class_count


def test_labels_cover_every_class_and_sizes_balance():
    rng = np.random.default_rng(1)
    part = build_partition(rng.standard_normal(103), 7)
    assert part.class_count == 7
    sizes = part.class_sizes
    assert sizes.sum() == 103
    assert sizes.max() - sizes.min() <= 1
    assert set(np.unique(part.class_of_row)) == set(range(1, 8))


def test_classes_are_ordered_by_value():
    x = np.array([5.0, 1.0, 3.0, 2.0, 4.0, 0.0])
    part = build_partition(x, 3)
    # lowest pair of values -> class 1, highest pair -> class 3
    assert part.class_of_row[np.argsort(x)].tolist() == [1, 1, 2, 2, 3, 3]


def test_representatives_are_class_means():
    x = np.array([0.0, 1.0, 10.0, 11.0])
    part = build_partition(x, 2)
    assert part.representatives.tolist() == [0.5, 10.5]


def test_rows_in_class_matches_labels():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(40)
    part = build_partition(x, 5)
    for h in range(1, 6):
        rows = part.rows_in_class(h)
        assert (part.class_of_row[rows] == h).all()
        assert rows.size == part.class_sizes[h - 1]


def test_ties_are_split_in_stable_row_order():
    # four tied values must be cut in original row order
    x = np.array([1.0, 1.0, 1.0, 1.0, 9.0, 9.0])
    part = build_partition(x, 3)
    assert part.class_of_row.tolist() == [1, 1, 2, 2, 3, 3]


def test_constant_column_is_degenerate():
    xm = SampleMatrix(np.column_stack([np.arange(10.0), np.full(10, 3.0)]),
                      ("good", "flat"))
    with pytest.raises(DataError, match="'flat' is constant"):
        partition_all(xm, 2)


def test_class_count_bounds():
    x = np.arange(6.0)
    with pytest.raises(DataError):
        build_partition(x, 1)
    with pytest.raises(DataError):
        build_partition(x, 7)


def test_default_class_count_rule():
    assert default_class_count(100) == 2
    assert default_class_count(1000) == 10
    assert default_class_count(2000) == 20
    assert default_class_count(100000) == 50  # capped


@given(n=st.integers(min_value=4, max_value=300),
       m=st.integers(min_value=2, max_value=12),
       seed=st.integers(min_value=0, max_value=50))
@settings(deadline=None, max_examples=60)
def test_partition_properties_hold_generally(n, m, seed):
    if m > n:
        return
    x = np.random.default_rng(seed).standard_normal(n)
    part = build_partition(x, m)
    sizes = part.class_sizes
    assert sizes.sum() == n and sizes.min() >= 1
    assert sizes.max() - sizes.min() <= 1
    # class boundaries respect the value ordering
    order = np.argsort(x, kind="stable")
    labels_sorted = part.class_of_row[order]
    assert (np.diff(labels_sorted) >= 0).all()
    # representatives are means of the member values
    for h in range(1, m + 1):
        np.testing.assert_allclose(part.representatives[h - 1],
                                   x[part.rows_in_class(h)].mean(), rtol=1e-12)
