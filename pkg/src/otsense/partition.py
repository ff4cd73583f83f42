"""Equal-frequency partitioning of input columns.

Each input column is split into M classes of near-equal size by sorting the
values (stable sort, so ties keep their original row order) and cutting the
sorted sequence into consecutive blocks.  When N is not a multiple of M the
first ``N mod M`` classes receive one extra row.  Class labels are 1-based
and each class is represented by the mean of its input values.
"""
from __future__ import annotations

import numpy as np

from .data import Partitioning, SampleMatrix
from .errors import DataError


def default_class_count(n: int) -> int:
    """Default number of classes: ``max(2, n // 100)`` capped at 50."""
    return min(50, max(2, n // 100))


def build_partition(values, class_count: int, input_index: int = 0,
                    name: str | None = None) -> Partitioning:
    """Partition one input column into ``class_count`` equal-frequency classes.

    Parameters
    ----------
    values : array_like
        1-D input column of length N >= class_count.
    class_count : int
        Number of classes M, 2 <= M <= N.
    input_index : int
        Position of the column in its sample matrix (bookkeeping only).
    name : str, optional
        Column name used in error messages.

    Returns
    -------
    Partitioning
    """
    label = name if name is not None else f"input {input_index}"
    x = np.asarray(values, dtype=np.float64).ravel()
    n = x.size
    if not np.isfinite(x).all():
        raise DataError(f"non-finite value in column {label!r}")
    if class_count < 2:
        raise DataError(f"need at least 2 classes, got {class_count}")
    if class_count > n:
        raise DataError(
            f"cannot split {n} rows of column {label!r} into {class_count} classes")
    if x.min() == x.max():
        raise DataError(f"degenerate input: column {label!r} is constant")

    order = np.argsort(x, kind="stable")
    base, extra = divmod(n, class_count)
    sizes = np.full(class_count, base, dtype=np.int64)
    sizes[:extra] += 1
    offsets = np.concatenate(([0], np.cumsum(sizes)))

    class_of_row = np.empty(n, dtype=np.int64)
    reps = np.empty(class_count, dtype=np.float64)
    for h in range(class_count):
        rows = order[offsets[h]:offsets[h + 1]]
        class_of_row[rows] = h + 1
        reps[h] = x[rows].mean()

    return Partitioning(input_index=input_index, class_of_row=class_of_row,
                        class_count=class_count, representatives=reps,
                        order=order, offsets=offsets)


def partition_all(x: SampleMatrix, class_count: int | None = None) -> list[Partitioning]:
    """Partition every column of an input matrix with a common class count."""
    m = default_class_count(x.n) if class_count is None else class_count
    return [build_partition(x.values[:, i], m, input_index=i, name=x.names[i])
            for i in range(x.cols)]
