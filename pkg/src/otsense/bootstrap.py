"""Nonparametric bootstrap for the sensitivity indices.

Rows of (X, Y) are resampled with replacement; every replicate re-partitions
from scratch and re-estimates, so the intervals reflect the full estimation
pipeline.  Replicate RNG streams are spawned from one SeedSequence, making
the result independent of evaluation order.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from .data import (BootstrapResult, BootstrapTable, GroundCost, IndexEstimate,
                   SampleMatrix, SensitivityDataset, SolverConfig)
from .errors import DataError, NumericalError
from .estimators import estimate

# replicates whose resampled x has a constant column are redrawn; this many
# total redraws means the input itself is (nearly) constant
_REDRAW_FACTOR = 10


def _stat_arrays(est: IndexEstimate) -> dict[str, np.ndarray]:
    stats = {"index": est.indices}
    if est.components:
        stats.update(est.components)
    return stats


def _intervals(original: np.ndarray, reps: np.ndarray, conf: float,
               ci_type: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    bias = reps.mean(axis=0) - original
    alpha = 1.0 - conf
    if ci_type == "normal":
        z = float(ndtri(1.0 - alpha / 2.0))
        sd = reps.std(axis=0, ddof=1)
        center = original - bias
        return bias, center - z * sd, center + z * sd
    q_lo = np.quantile(reps, alpha / 2.0, axis=0)
    q_hi = np.quantile(reps, 1.0 - alpha / 2.0, axis=0)
    if ci_type == "percentile":
        return bias, q_lo, q_hi
    # basic: reflect the percentile interval around the original estimate
    return bias, 2.0 * original - q_hi, 2.0 * original - q_lo


def bootstrap_indices(ds: SensitivityDataset, class_count: int | None = None,
                      config: SolverConfig | None = None,
                      cost: GroundCost | None = None, replicates: int = 1000,
                      confidence: float = 0.95, ci_type: str = "normal",
                      seed: int = 0,
                      class_weighting: str = "uniform") -> BootstrapResult:
    """Bootstrap the indices (and components, when present).

    Parameters
    ----------
    ds, class_count, config, cost, class_weighting
        Passed through to :func:`otsense.estimators.estimate`.
    replicates : int
        Number of bootstrap resamples R >= 2.
    confidence : float
        Interval coverage level in (0, 1).
    ci_type : {"normal", "basic", "percentile"}
        Normal: bias-corrected center +- z * bootstrap sd.  Percentile:
        type-7 quantiles of the replicate distribution.  Basic: the
        percentile interval reflected around the original estimate.
    seed : int
        Master seed; per-replicate streams are spawned from it.
    """
    if replicates < 2:
        raise DataError(f"need at least 2 bootstrap replicates, got {replicates}")
    if not 0.0 < confidence < 1.0:
        raise DataError(f"confidence must lie in (0, 1), got {confidence}")
    if ci_type not in ("normal", "basic", "percentile"):
        raise DataError(f"unknown ci type {ci_type!r}")

    original = estimate(ds, class_count, cost, config, class_weighting)
    stats0 = _stat_arrays(original)

    n = ds.n
    xv = ds.x.values
    yv = ds.y.values
    streams = np.random.SeedSequence(seed).spawn(replicates)
    reps: dict[str, list[np.ndarray]] = {k: [] for k in stats0}
    redraws_left = _REDRAW_FACTOR * replicates
    for r in range(replicates):
        rng = np.random.default_rng(streams[r])
        while True:
            take = rng.integers(0, n, size=n)
            xr = xv[take]
            if (xr.min(axis=0) < xr.max(axis=0)).all():
                break
            redraws_left -= 1
            if redraws_left < 0:
                raise NumericalError(
                    "bootstrap redraw budget exhausted: resampled inputs are "
                    "constant too often (an input column is nearly constant)")
        ds_r = SensitivityDataset(SampleMatrix(xr, ds.x.names),
                                  SampleMatrix(yv[take], ds.y.names))
        est_r = estimate(ds_r, class_count, cost, config, class_weighting)
        for key, val in _stat_arrays(est_r).items():
            if key in reps:
                reps[key].append(val)

    tables = {}
    for key, arrs in reps.items():
        if len(arrs) != replicates:
            continue  # a component present in some replicates only
        stack = np.stack(arrs)
        bias, lo, hi = _intervals(stats0[key], stack, confidence, ci_type)
        tables[key] = BootstrapTable(stats0[key], bias, lo, hi)
    return BootstrapResult(replicate_count=replicates, ci_type=ci_type,
                           confidence=confidence, stats=tables)
