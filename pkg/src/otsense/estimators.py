"""Given-data sensitivity indices built on optimal transport.

For every input column the sample is split into equal-frequency classes;
the transport cost between the full output sample (uniform weights) and
each class-conditional output subsample is averaged over classes and
normalized by the U-statistic pair bound, giving an index in [0, 1]:

    index_i = mean_h OT(P_Y, P_{Y | X_i in class h}) / bound.

Four routes to the per-class cost are available: the exact transportation
simplex, entropic Sinkhorn (plain or log-stabilized, with the regularizer
expressed relative to the mean pair cost), a sorted-sample rule for scalar
outputs, and the moment (Gaussian) closed form which splits each cost into
an advective mean shift plus a diffusive covariance deformation.
"""
from __future__ import annotations

import numpy as np

from .cost import full_cost_matrix, upper_bound
from .data import (GroundCost, IndexEstimate, Partitioning, SampleMatrix,
                   SensitivityDataset, SolverConfig)
from .errors import DataError
from .partition import partition_all
from .solvers import solve_1d, solve_exact, solve_sinkhorn, solve_sinkhorn_stable
from .solvers.bures import bures_components_batch

_WEIGHTINGS = ("uniform", "size")
_DEFAULT_RELATIVE_EPSILON = 0.01


def _class_weights(part: Partitioning, mode: str, n: int) -> np.ndarray:
    if mode == "uniform":
        return np.full(part.class_count, 1.0 / part.class_count)
    return part.class_sizes / float(n)


def _check_weighting(mode: str) -> None:
    if mode not in _WEIGHTINGS:
        raise DataError(f"unknown class weighting {mode!r}; "
                        f"expected one of {_WEIGHTINGS}")


def _pair_mean_upper_bound(C: np.ndarray) -> float:
    """U-statistic bound from an already-built all-pairs matrix (i < j only)."""
    n = C.shape[0]
    total = 0.0
    for i in range(n - 1):
        total += float(C[i, i + 1:].sum())
    ub = 2.0 * total / (n * (n - 1))
    if not ub > 0.0:
        raise DataError("degenerate output: zero transport bound "
                        "(all output rows are identical)")
    return ub


def _class_moments(y: np.ndarray, part: Partitioning) -> tuple[np.ndarray, np.ndarray]:
    """Per-class mean (H, k) and ddof=1 covariance (H, k, k)."""
    k = y.shape[1]
    sizes = part.class_sizes
    ys = y[part.order]
    sums = np.add.reduceat(ys, part.offsets[:-1], axis=0)
    means = sums / sizes[:, None]
    covs = np.empty((part.class_count, k, k))
    for h in range(part.class_count):
        blk = ys[part.offsets[h]:part.offsets[h + 1]]
        d = blk - means[h]
        covs[h] = d.T @ d / (sizes[h] - 1)
    return means, covs


def _wb_class_costs(y: np.ndarray, part: Partitioning, mean0: np.ndarray,
                    cov0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    means, covs = _class_moments(y, part)
    return bures_components_batch(mean0, cov0, means, covs)


def ot_indices(ds: SensitivityDataset, class_count: int | None = None,
               cost: GroundCost | None = None, config: SolverConfig | None = None,
               class_weighting: str = "uniform",
               want_components: bool = True) -> IndexEstimate:
    """Indices from per-class matrix transport solves.

    Parameters
    ----------
    ds : SensitivityDataset
    class_count : int, optional
        Classes per input; defaults to ``max(2, N // 100)`` capped at 50.
    cost : GroundCost, optional
        Ground cost on outputs (default squared Euclidean).
    config : SolverConfig, optional
        Solver choice (exact | sinkhorn | sinkhorn-stable) and knobs.  The
        entropic ``epsilon`` is relative to the cost scale: the solver runs
        at ``epsilon * max(C)`` with C the all-pairs output cost matrix
        (equivalent to normalizing C by its largest entry).  When ``epsilon``
        is left unset a well-conditioned default of ``0.01 * mean(C)`` is
        used instead.
    class_weighting : {"uniform", "size"}
        Average per-class costs with equal weights or with N_h / N.
    want_components : bool
        Attach the advective/diffusive/residual split when the run is exact
        with squared-Euclidean cost (skipped silently when classes are too
        small to estimate covariances).
    """
    cost = cost or GroundCost.sq_euclidean()
    config = config or SolverConfig()
    _check_weighting(class_weighting)
    if config.solver in ("1d", "wass-bures"):
        raise DataError(f"solver {config.solver!r} has a dedicated estimator; "
                        "use ot_indices_1d / ot_indices_wb (or estimate())")

    n, d = ds.n, ds.d
    parts = partition_all(ds.x, class_count)
    H = parts[0].class_count
    C = full_cost_matrix(ds.y, cost)
    ub = _pair_mean_upper_bound(C)

    eps_abs = None
    if config.solver in ("sinkhorn", "sinkhorn-stable"):
        if config.epsilon is None:
            eps_abs = _DEFAULT_RELATIVE_EPSILON * float(C.mean())
        else:
            eps_abs = config.epsilon * float(C.max())

    a = np.full(n, 1.0 / n)
    indices = np.empty(d)
    seps = np.empty((d, H))
    reps = np.empty((d, H))
    converged = True
    for i, part in enumerate(parts):
        class_costs = np.empty(H)
        for h in range(1, H + 1):
            rows = part.rows_in_class(h)
            Ch = C[:, rows]
            bh = np.full(rows.size, 1.0 / rows.size)
            if config.solver == "exact":
                out = solve_exact(Ch, a, bh, want_plan=False)
            elif config.solver == "sinkhorn":
                out = solve_sinkhorn(Ch, a, bh, eps_abs, config.num_iterations,
                                     config.max_err, want_plan=False)
            else:
                out = solve_sinkhorn_stable(Ch, a, bh, eps_abs,
                                            config.num_iterations,
                                            config.max_err, want_plan=False)
            class_costs[h - 1] = out.cost
            converged = converged and out.converged
        w = _class_weights(part, class_weighting, n)
        indices[i] = (w * class_costs).sum() / ub
        seps[i] = class_costs / ub
        reps[i] = part.representatives

    components = None
    small = min(int(p.class_sizes.min()) for p in parts)
    if (want_components and config.solver == "exact"
            and cost.kind == "sq-euclidean" and small > ds.k):
        y = ds.y.values
        mean0 = y.mean(axis=0)
        cov0 = np.atleast_2d(np.cov(y, rowvar=False, ddof=1))
        adv = np.empty(d)
        dif = np.empty(d)
        for i, part in enumerate(parts):
            adv_h, dif_h = _wb_class_costs(y, part, mean0, cov0)
            w = _class_weights(part, class_weighting, n)
            adv[i] = (w * adv_h).sum() / ub
            dif[i] = (w * dif_h).sum() / ub
        components = {"advective": adv, "diffusive": dif,
                      "residual": np.maximum(indices - adv - dif, 0.0)}

    return IndexEstimate(method=config.solver, input_names=ds.x.names,
                         indices=indices, bound=ub, separations=seps,
                         representatives=reps, components=components,
                         converged=converged)


def _oned_core(y_col: np.ndarray, parts: list[Partitioning], p: float,
               class_weighting: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    n = y_col.size
    ub = upper_bound(y_col.reshape(-1, 1), GroundCost.minkowski_power(p, p))
    y_sorted = np.sort(y_col)
    d = len(parts)
    H = parts[0].class_count
    indices = np.empty(d)
    seps = np.empty((d, H))
    reps = np.empty((d, H))
    for i, part in enumerate(parts):
        class_costs = np.empty(H)
        for h in range(1, H + 1):
            cond = np.sort(y_col[part.rows_in_class(h)])
            class_costs[h - 1] = solve_1d(y_sorted, cond, p).cost
        w = _class_weights(part, class_weighting, n)
        indices[i] = (w * class_costs).sum() / ub
        seps[i] = class_costs / ub
        reps[i] = part.representatives
    return indices, seps, reps, ub


def ot_indices_1d(ds: SensitivityDataset, class_count: int | None = None,
                  p: float = 2.0, class_weighting: str = "uniform") -> IndexEstimate:
    """Indices for a scalar output via the sorted-sample rule (cost |dy|^p)."""
    _check_weighting(class_weighting)
    if ds.k != 1:
        raise DataError(f"the 1-D estimator needs a single output column, got {ds.k}")
    parts = partition_all(ds.x, class_count)
    indices, seps, reps, ub = _oned_core(ds.y.values[:, 0], parts, p, class_weighting)
    return IndexEstimate(method="1d", input_names=ds.x.names, indices=indices,
                         bound=ub, separations=seps, representatives=reps)


def ot_indices_wb(ds: SensitivityDataset, class_count: int | None = None,
                  class_weighting: str = "uniform") -> IndexEstimate:
    """Moment-based indices: advective + diffusive Gaussian transport costs.

    Each per-class cost is the closed-form transport cost between Gaussian
    summaries of the full and conditional output samples, so only means and
    covariances enter; the squared-Euclidean pair bound normalizes.
    """
    _check_weighting(class_weighting)
    parts = partition_all(ds.x, class_count)
    y = ds.y.values
    smallest = min(int(p.class_sizes.min()) for p in parts)
    if smallest <= ds.k:
        raise DataError(f"class of size {smallest} is too small to estimate a "
                        f"{ds.k}-dimensional covariance; reduce the class count")
    ub = upper_bound(y)
    mean0 = y.mean(axis=0)
    cov0 = np.atleast_2d(np.cov(y, rowvar=False, ddof=1))

    n, d = ds.n, ds.d
    H = parts[0].class_count
    indices = np.empty(d)
    adv = np.empty(d)
    dif = np.empty(d)
    seps = np.empty((d, H))
    reps = np.empty((d, H))
    for i, part in enumerate(parts):
        adv_h, dif_h = _wb_class_costs(y, part, mean0, cov0)
        w = _class_weights(part, class_weighting, n)
        adv[i] = (w * adv_h).sum() / ub
        dif[i] = (w * dif_h).sum() / ub
        indices[i] = adv[i] + dif[i]
        seps[i] = (adv_h + dif_h) / ub
        reps[i] = part.representatives
    return IndexEstimate(method="wass-bures", input_names=ds.x.names,
                         indices=indices, bound=ub, separations=seps,
                         representatives=reps,
                         components={"advective": adv, "diffusive": dif})


def ot_indices_smap(ds: SensitivityDataset, class_count: int | None = None,
                    p: float = 2.0, class_weighting: str = "uniform") -> np.ndarray:
    """Per-output sensitivity map: entry (i, j) is the 1-D index of input i
    on output column j.  Shape (d, k)."""
    _check_weighting(class_weighting)
    parts = partition_all(ds.x, class_count)
    out = np.empty((ds.d, ds.k))
    for j in range(ds.k):
        try:
            indices, _, _, _ = _oned_core(ds.y.values[:, j], parts, p,
                                          class_weighting)
        except DataError as exc:
            raise DataError(f"output column {ds.y.names[j]!r}: {exc}") from None
        out[:, j] = indices
    return out


def estimate(ds: SensitivityDataset, class_count: int | None = None,
             cost: GroundCost | None = None, config: SolverConfig | None = None,
             class_weighting: str = "uniform") -> IndexEstimate:
    """Dispatch on ``config.solver`` to the matching estimator."""
    config = config or SolverConfig()
    if config.solver == "1d":
        return ot_indices_1d(ds, class_count, p=config.p,
                             class_weighting=class_weighting)
    if config.solver == "wass-bures":
        return ot_indices_wb(ds, class_count, class_weighting=class_weighting)
    return ot_indices(ds, class_count, cost, config, class_weighting)


def irrelevance_threshold(data, class_count: int | None = None,
                          dummy: str = "standard-normal",
                          cost: GroundCost | None = None,
                          config: SolverConfig | None = None, seed: int = 0,
                          class_weighting: str = "uniform") -> IndexEstimate:
    """Index of a synthetic input independent of everything.

    Pairs the outputs (``data`` may be a dataset, a SampleMatrix or a raw
    array of outputs) with one freshly drawn dummy column — standard normal
    or uniform on [0, 1] — and estimates its index; observed indices at or
    below this value are indistinguishable from irrelevant at the given
    sample size and class count.
    """
    if isinstance(data, SensitivityDataset):
        y = data.y
    elif isinstance(data, SampleMatrix):
        y = data
    else:
        y = SampleMatrix(data, prefix="Y")
    rng = np.random.default_rng(seed)
    if dummy == "standard-normal":
        col = rng.standard_normal(y.n)
    elif dummy == "uniform":
        col = rng.uniform(0.0, 1.0, y.n)
    else:
        raise DataError(f"unknown dummy distribution {dummy!r}; expected "
                        "'standard-normal' or 'uniform'")
    dummy_ds = SensitivityDataset(SampleMatrix(col, ("dummy",)), y)
    return estimate(dummy_ds, class_count, cost, config, class_weighting)


def local_separations(est: IndexEstimate) -> list[tuple[str, int, float, float]]:
    """Flatten an estimate into (input, class, representative x, scaled
    separation) rows, input-major then class order."""
    rows = []
    for i, name in enumerate(est.input_names):
        for h in range(est.separations.shape[1]):
            rows.append((name, h + 1, float(est.representatives[i, h]),
                         float(est.separations[i, h])))
    return rows
