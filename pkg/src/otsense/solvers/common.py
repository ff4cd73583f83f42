"""Input validation shared by the matrix solvers."""
from __future__ import annotations

import numpy as np

from ..errors import DataError

MARGINAL_TOL = 1e-12


def validate_problem(C, a, b) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coerce and check one transport problem (cost, row/col marginals)."""
    C = np.ascontiguousarray(C, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if C.ndim != 2 or C.shape != (a.size, b.size):
        raise DataError(f"cost shape {C.shape} does not match marginals "
                        f"({a.size}, {b.size})")
    if not np.isfinite(C).all() or (C < 0).any():
        raise DataError("cost matrix must be finite and non-negative")
    if (a < 0).any() or (b < 0).any():
        raise DataError("marginals must be non-negative")
    sa, sb = a.sum(), b.sum()
    if abs(sa - 1.0) > MARGINAL_TOL or abs(sb - 1.0) > MARGINAL_TOL:
        raise DataError(f"infeasible marginals: sums {sa:.17g} and {sb:.17g} "
                        f"must equal 1 within {MARGINAL_TOL:g}")
    return C, a, b
