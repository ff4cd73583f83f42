"""Closed-form transport cost between Gaussian approximations.

For measures summarized by (mean, covariance) the squared-Euclidean
transport cost splits into a location term and a shape term:

    ||m - m'||^2  +  tr(S) + tr(S') - 2 tr( (S^{1/2} S' S^{1/2})^{1/2} )

The first (advective) part moves the mean, the second (diffusive) part
deforms the covariance; both are non-negative.
"""
from __future__ import annotations

import numpy as np

from ..errors import DataError, NumericalError

# eigenvalues in (-_CLAMP_REL * max_eig, 0) are treated as roundoff zeros
_CLAMP_REL = 1e-10


def _clamped_eigh(S: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    w, q = np.linalg.eigh(S)
    scale = max(float(w[-1]), 0.0)
    floor = -_CLAMP_REL * max(scale, 1.0)
    if w[0] < floor:
        raise NumericalError(
            f"{what} is not positive semi-definite: eigenvalue {w[0]:.3g} "
            f"below clamp tolerance {floor:.3g}")
    return np.maximum(w, 0.0), q


def matrix_sqrt_psd(S, sym_tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a symmetric PSD matrix.

    Symmetry is required within ``sym_tol``; eigenvalues inside the roundoff
    band (-1e-10 * max_eig, 0) are clamped to zero, anything more negative
    raises :class:`NumericalError`.
    """
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DataError(f"expected a square matrix, got shape {S.shape}")
    asym = float(np.abs(S - S.T).max(initial=0.0))
    if asym > sym_tol * max(1.0, float(np.abs(S).max(initial=0.0))):
        raise DataError(f"matrix is not symmetric: max |S - S^T| = {asym:.3g}")
    w, q = _clamped_eigh((S + S.T) / 2.0, "matrix")
    return (q * np.sqrt(w)) @ q.T


def bures_cost(mean_a, cov_a, mean_b, cov_b) -> tuple[float, float, float]:
    """(total, advective, diffusive) Gaussian transport cost.

    The advective part is ``||mean_a - mean_b||^2``; the diffusive part the
    Bures discrepancy between the covariances, floored at 0 when roundoff
    drives it within -1e-10 of zero.
    """
    ma = np.asarray(mean_a, dtype=np.float64).ravel()
    mb = np.asarray(mean_b, dtype=np.float64).ravel()
    Sa = np.atleast_2d(np.asarray(cov_a, dtype=np.float64))
    Sb = np.atleast_2d(np.asarray(cov_b, dtype=np.float64))
    if ma.size != mb.size or Sa.shape != Sb.shape or Sa.shape != (ma.size, ma.size):
        raise DataError("mean/covariance dimensions do not agree")

    adv = float(((ma - mb) ** 2).sum())

    root_a = matrix_sqrt_psd(Sa)
    mid = root_a @ Sb @ root_a
    w, _ = _clamped_eigh((mid + mid.T) / 2.0, "covariance product")
    diff = float(np.trace(Sa) + np.trace(Sb) - 2.0 * np.sqrt(w).sum())
    scale = max(1.0, float(np.trace(Sa) + np.trace(Sb)))
    if diff < 0.0:
        if diff < -_CLAMP_REL * scale:
            raise NumericalError(f"diffusive part {diff:.3g} is negative beyond "
                                 f"roundoff tolerance")
        diff = 0.0
    return adv + diff, adv, diff


def bures_components_batch(mean0: np.ndarray, cov0: np.ndarray,
                           means: np.ndarray, covs: np.ndarray
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (advective, diffusive) parts against one reference Gaussian.

    ``means`` has shape (H, k) and ``covs`` (H, k, k); the reference
    ``(mean0, cov0)`` is shared.  Used by the moment-based estimator where H
    per-class costs against the overall sample are needed at once.
    """
    root0 = matrix_sqrt_psd(cov0)
    adv = ((means - mean0[None, :]) ** 2).sum(axis=1)
    mid = np.einsum("ab,hbc,cd->had", root0, covs, root0)
    mid = (mid + np.swapaxes(mid, 1, 2)) / 2.0
    w = np.linalg.eigvalsh(mid)
    scale = np.maximum(w[:, -1], 0.0)
    floor = -_CLAMP_REL * np.maximum(scale, 1.0)
    if (w[:, 0] < floor).any():
        h = int(np.argmin(w[:, 0] - floor))
        raise NumericalError(
            f"covariance product in class {h + 1} lost positive "
            f"semi-definiteness (eigenvalue {w[h, 0]:.3g})")
    w = np.maximum(w, 0.0)
    tr0 = float(np.trace(cov0))
    diff = tr0 + np.einsum("hkk->h", covs) - 2.0 * np.sqrt(w).sum(axis=1)
    np.maximum(diff, 0.0, out=diff)
    return adv, diff
