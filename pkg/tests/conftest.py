"""Shared fixtures: small deterministic datasets and CSV helpers."""
import csv

import numpy as np
import pytest

from otsense import SampleMatrix, SensitivityDataset


def make_dataset(n=120, d=2, k=2, seed=0, names=None):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    y = np.column_stack([x.sum(axis=1), x[:, 0] - 0.5 * rng.standard_normal(n)])
    y = y[:, :k] if k <= 2 else np.column_stack([y] + [rng.standard_normal(n) for _ in range(k - 2)])
    xm = SampleMatrix(x, names or tuple(f"X{i+1}" for i in range(d)))
    ym = SampleMatrix(y, tuple(f"Y{j+1}" for j in range(k)))
    return SensitivityDataset(xm, ym)


@pytest.fixture
def small_ds():
    return make_dataset()


@pytest.fixture
def csv_dataset(tmp_path):
    """A tiny dataset CSV on disk, returning (path, x_cols, y_cols)."""
    ds = make_dataset(n=80, seed=3)
    path = tmp_path / "data.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*ds.x.names, *ds.y.names])
        for xi, yi in zip(ds.x.values, ds.y.values):
            w.writerow([repr(float(v)) for v in (*xi, *yi)])
    return path, list(ds.x.names), list(ds.y.names)
