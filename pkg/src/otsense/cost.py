"""Ground-cost matrices and the normalizing transport upper bound.

The bound is the U-statistic mean of the ground cost over distinct sample
pairs, ``2 / (N (N-1)) * sum_{i<j} c(y_i, y_j)``.  It upper-bounds every
between-class transport cost the estimators produce, so dividing by it maps
indices into [0, 1].
"""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .data import CostMatrix, GroundCost, SampleMatrix
from .errors import DataError

# Beyond this sample size the exact pair sum gives way to a subsample.
_EXACT_PAIR_LIMIT = 5000


def _as_points(y) -> np.ndarray:
    if isinstance(y, SampleMatrix):
        y = y.values
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def _sq_euclidean(ya: np.ndarray, yb: np.ndarray) -> np.ndarray:
    # |a|^2 + |b|^2 - 2 a.b via one GEMM; clip the tiny negatives roundoff leaves
    na = np.einsum("ij,ij->i", ya, ya)
    nb = np.einsum("ij,ij->i", yb, yb)
    c = na[:, None] + nb[None, :]
    c -= 2.0 * (ya @ yb.T)
    np.maximum(c, 0.0, out=c)
    return c


def pairwise_cost(cost: GroundCost, ya, yb) -> np.ndarray:
    """Raw (n, m) matrix of ground costs between two point blocks."""
    ya, yb = _as_points(ya), _as_points(yb)
    if ya.shape[1] != yb.shape[1]:
        raise DataError(f"point dimensions differ: {ya.shape[1]} vs {yb.shape[1]}")
    if cost.kind == "sq-euclidean":
        return _sq_euclidean(ya, yb)
    if cost.kind == "minkowski-power":
        c = cdist(ya, yb, metric="minkowski", p=cost.p)
        if cost.q != 1.0:
            c **= cost.q
        return c
    out = np.asarray(cost.func(ya, yb), dtype=np.float64)
    if out.shape != (ya.shape[0], yb.shape[0]):
        raise DataError(f"custom cost callback returned shape {out.shape}, "
                        f"expected {(ya.shape[0], yb.shape[0])}")
    if not np.isfinite(out).all():
        raise DataError("custom cost callback returned non-finite entries")
    if (out < 0).any():
        raise DataError("custom cost callback returned negative entries")
    return out


def cost_matrix(ya, yb, cost: GroundCost) -> CostMatrix:
    """Validated :class:`CostMatrix` between two point sets."""
    ya, yb = _as_points(ya), _as_points(yb)
    return CostMatrix(pairwise_cost(cost, ya, yb), ya, yb)


def full_cost_matrix(y, cost: GroundCost) -> np.ndarray:
    """All-pairs (N, N) cost matrix of one output sample.

    For the built-in kinds the diagonal is forced to exact zero (the ground
    cost of a point with itself), which GEMM roundoff would otherwise smear.
    """
    pts = _as_points(y)
    c = pairwise_cost(cost, pts, pts)
    if cost.kind != "custom":
        np.fill_diagonal(c, 0.0)
    return c


def _is_squared_euclidean(cost: GroundCost) -> bool:
    return cost.kind == "sq-euclidean" or (
        cost.kind == "minkowski-power" and cost.p == 2.0 and cost.q == 2.0)


def upper_bound(y, cost: GroundCost | None = None, exact: bool | None = None) -> float:
    """U-statistic upper bound for normalizing transport costs.

    Parameters
    ----------
    y : array_like or SampleMatrix
        Output sample, shape (N, k).
    cost : GroundCost
        Ground cost; defaults to squared Euclidean.
    exact : bool, optional
        Force the exact pair sum (True) or the subsample estimate (False);
        by default exact is used up to N = 5000.  For the squared-Euclidean
        kind the pair sum collapses to ``2 * trace(sample covariance)`` and
        is always exact.

    Raises
    ------
    DataError
        If N < 2 or the bound is zero (constant output sample).
    """
    cost = cost or GroundCost.sq_euclidean()
    pts = _as_points(y)
    n = pts.shape[0]
    if n < 2:
        raise DataError(f"need at least 2 rows to form pairs, got {n}")

    if _is_squared_euclidean(cost):
        # sum_{i<j} |y_i - y_j|^2 == N (N-1) tr(S)  with S the ddof=1 covariance
        ub = 2.0 * pts.var(axis=0, ddof=1).sum()
    else:
        if exact is None:
            exact = n <= _EXACT_PAIR_LIMIT
        if not exact and n > _EXACT_PAIR_LIMIT:
            # Fixed-seed row subsample: all ~5000^2/2 pairs of a uniform
            # 5000-row draw, an unbiased estimate of the pair mean.
            rng = np.random.default_rng(0)
            pts = pts[np.sort(rng.choice(n, _EXACT_PAIR_LIMIT, replace=False))]
            n = _EXACT_PAIR_LIMIT
        total = 0.0
        block = max(1, 2**22 // max(n, 1))
        cols = np.arange(n)
        for i0 in range(0, n, block):
            blk = pairwise_cost(cost, pts[i0:i0 + block], pts)
            # strict upper triangle only: the U-statistic pairs are i < j
            mask = cols[None, :] > np.arange(i0, min(i0 + block, n))[:, None]
            total += float(blk.sum(where=mask))
        ub = 2.0 * total / (n * (n - 1))

    if not ub > 0.0:
        raise DataError("degenerate output: zero transport bound "
                        "(all output rows are identical)")
    return float(ub)
