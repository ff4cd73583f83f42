"""Shared data model: sample matrices, partitions, ground costs, transport
plans, solver configuration and estimation results.

Every type validates its invariants on construction and exposes read-only
numpy arrays, so instances are safe to share between workers.  Constructors
are the supported way to obtain the types; code elsewhere in the package
never mutates them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DataError

_SOLVERS = ("1d", "wass-bures", "exact", "sinkhorn", "sinkhorn-stable")
_COST_KINDS = ("sq-euclidean", "minkowski-power", "custom")
_CI_TYPES = ("normal", "basic", "percentile")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def default_names(prefix: str, count: int) -> tuple[str, ...]:
    """Fallback column labels: ``X1..Xd`` for inputs, ``Y1..Yk`` for outputs."""
    return tuple(f"{prefix}{i + 1}" for i in range(count))


def _check_finite(arr: np.ndarray, names: Sequence[str], what: str) -> None:
    finite = np.isfinite(arr)
    if not finite.all():
        r, c = np.argwhere(~finite)[0]
        raise DataError(
            f"non-finite value in {what} at (row {r + 1}, column {names[c]!r})"
        )


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    """Dense matrix of realizations: rows are samples, columns are variables.

    Parameters
    ----------
    values : array_like
        Shape ``(N, d)``; a 1-D vector is treated as a single column.
    names : sequence of str, optional
        Column labels.  Defaults to ``prefix1..prefixd``.
    prefix : str
        Prefix used when ``names`` is absent.
    """

    values: np.ndarray
    names: tuple[str, ...] = ()
    prefix: str = "X"

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise DataError(f"sample matrix must be 2-D, got {arr.ndim} dimensions")
        if arr.shape[0] < 2:
            raise DataError(f"need at least 2 rows, got {arr.shape[0]}")
        if arr.shape[1] < 1:
            raise DataError("need at least 1 column")
        names = tuple(self.names) or default_names(self.prefix, arr.shape[1])
        if len(names) != arr.shape[1]:
            raise DataError(
                f"{len(names)} column names for {arr.shape[1]} columns"
            )
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})[0]
            raise DataError(f"duplicate column name {dup!r}")
        _check_finite(arr, names, "sample matrix")
        object.__setattr__(self, "values", _frozen(np.ascontiguousarray(arr)))
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.values[:, self.names.index(name)]
        except ValueError:
            raise DataError(f"no column named {name!r}") from None

    def select(self, names: Sequence[str]) -> "SampleMatrix":
        """Sub-matrix with the given columns, in the given order."""
        idx = []
        for name in names:
            if name not in self.names:
                raise DataError(f"no column named {name!r}")
            idx.append(self.names.index(name))
        return SampleMatrix(self.values[:, idx], tuple(names))


@dataclass(frozen=True, eq=False)
class SensitivityDataset:
    """Paired input/output sample of common length N."""

    x: SampleMatrix
    y: SampleMatrix

    def __post_init__(self) -> None:
        if self.x.n != self.y.n:
            raise DataError(
                f"row count mismatch: {self.x.n} input rows vs {self.y.n} output rows"
            )
        overlap = set(self.x.names) & set(self.y.names)
        if overlap:
            raise DataError(f"duplicate column name {sorted(overlap)[0]!r} "
                            "appears in both inputs and outputs")

    @property
    def n(self) -> int:
        return self.x.n

    @property
    def d(self) -> int:
        return self.x.cols

    @property
    def k(self) -> int:
        return self.y.cols


def validate_dataset(x, y, x_names: Sequence[str] = (), y_names: Sequence[str] = ()) -> SensitivityDataset:
    """Assemble and fully validate a dataset from arrays or SampleMatrix.

    Checks row-count agreement, finiteness, name uniqueness and minimum
    sample size; raises :class:`DataError` on the first violation.
    """
    if not isinstance(x, SampleMatrix):
        x = SampleMatrix(x, tuple(x_names), prefix="X")
    if not isinstance(y, SampleMatrix):
        y = SampleMatrix(y, tuple(y_names), prefix="Y")
    return SensitivityDataset(x, y)


@dataclass(frozen=True, eq=False)
class Partitioning:
    """Equal-frequency grouping of one input column.

    ``class_of_row`` holds 1-based class labels; class ``h`` occupies rows
    ``order[offsets[h-1]:offsets[h]]`` where ``order`` sorts the column
    (stable, so ties keep their original row order).  ``representatives``
    are per-class means of the input values.
    """

    input_index: int
    class_of_row: np.ndarray
    class_count: int
    representatives: np.ndarray
    order: np.ndarray = field(repr=False, kw_only=True)
    offsets: np.ndarray = field(repr=False, kw_only=True)

    def __post_init__(self) -> None:
        labels = np.asarray(self.class_of_row, dtype=np.int64)
        h = self.class_count
        if h < 2:
            raise DataError(f"need at least 2 classes, got {h}")
        if labels.min(initial=1) < 1 or labels.max(initial=h) > h:
            raise DataError("class labels must lie in 1..class_count")
        counts = np.bincount(labels, minlength=h + 1)[1:]
        if (counts == 0).any():
            raise DataError("every class must be non-empty")
        if counts.max() - counts.min() > 1:
            raise DataError("class sizes may differ by at most one")
        if len(self.representatives) != h or len(self.offsets) != h + 1:
            raise DataError("representatives/offsets inconsistent with class_count")
        object.__setattr__(self, "class_of_row", _frozen(labels))
        object.__setattr__(self, "representatives",
                           _frozen(np.asarray(self.representatives, dtype=np.float64)))
        object.__setattr__(self, "order", _frozen(np.asarray(self.order, dtype=np.int64)))
        object.__setattr__(self, "offsets", _frozen(np.asarray(self.offsets, dtype=np.int64)))

    @property
    def class_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    def rows_in_class(self, label: int) -> np.ndarray:
        """Row indices of class ``label`` (1-based)."""
        if not 1 <= label <= self.class_count:
            raise DataError(f"class label {label} outside 1..{self.class_count}")
        return self.order[self.offsets[label - 1]:self.offsets[label]]


@dataclass(frozen=True)
class GroundCost:
    """Ground cost on output space.

    Kinds: ``sq-euclidean`` (squared Euclidean distance), ``minkowski-power``
    (``(sum_i |a_i - b_i|**p) ** (q/p)``), or ``custom`` (a callback mapping
    two row blocks of shapes (n, k) and (m, k) to an (n, m) matrix of
    non-negative finite costs).
    """

    kind: str
    p: float = 2.0
    q: float = 2.0
    func: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.kind not in _COST_KINDS:
            raise DataError(f"unknown ground cost kind {self.kind!r}; "
                            f"expected one of {_COST_KINDS}")
        if self.kind == "minkowski-power":
            if not (self.p >= 1.0):
                raise DataError(f"minkowski exponent p must be >= 1, got {self.p}")
            if not (self.q > 0.0):
                raise DataError(f"minkowski power q must be > 0, got {self.q}")
        if self.kind == "custom" and not callable(self.func):
            raise DataError("custom ground cost needs a callable")

    @staticmethod
    def sq_euclidean() -> "GroundCost":
        return GroundCost("sq-euclidean")

    @staticmethod
    def minkowski_power(p: float, q: float) -> "GroundCost":
        return GroundCost("minkowski-power", p=p, q=q)

    @staticmethod
    def custom(func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "GroundCost":
        return GroundCost("custom", func=func)


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Pairwise ground costs between two point sets, with provenance."""

    entries: np.ndarray
    row_points: np.ndarray
    col_points: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.entries, dtype=np.float64)
        if c.ndim != 2:
            raise DataError("cost matrix must be 2-D")
        if not np.isfinite(c).all():
            raise DataError("cost matrix contains non-finite entries")
        if (c < 0).any():
            raise DataError("cost matrix contains negative entries")
        object.__setattr__(self, "entries", _frozen(c))
        object.__setattr__(self, "row_points", _frozen(np.asarray(self.row_points)))
        object.__setattr__(self, "col_points", _frozen(np.asarray(self.col_points)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Coupling between two discrete measures.

    The coupling is non-negative and its row/column sums match the stated
    marginals within ``tol`` (1e-9 for exact plans, the achieved marginal
    error for entropic plans).
    """

    coupling: np.ndarray
    row_marginal: np.ndarray
    col_marginal: np.ndarray
    tol: float = 1e-9

    def __post_init__(self) -> None:
        p = np.asarray(self.coupling, dtype=np.float64)
        a = np.asarray(self.row_marginal, dtype=np.float64)
        b = np.asarray(self.col_marginal, dtype=np.float64)
        if p.shape != (a.size, b.size):
            raise DataError(f"coupling shape {p.shape} does not match marginals "
                            f"({a.size}, {b.size})")
        if (p < 0).any():
            raise DataError("coupling has negative mass")
        err = abs(p.sum(axis=1) - a).sum() + abs(p.sum(axis=0) - b).sum()
        if err > self.tol:
            raise DataError(f"coupling violates marginals: L1 error {err:.3g} "
                            f"exceeds tolerance {self.tol:.3g}")
        object.__setattr__(self, "coupling", _frozen(p))
        object.__setattr__(self, "row_marginal", _frozen(a))
        object.__setattr__(self, "col_marginal", _frozen(b))


@dataclass(frozen=True)
class SolverConfig:
    """Choice of transport solver plus its tuning knobs.

    ``epsilon`` is the *relative* entropic regularization used by the
    estimators: the effective regularizer is ``epsilon * max(C)`` with C the
    full pairwise output cost matrix, i.e. epsilon applies to the cost
    normalized by its largest entry.  When unset the estimators fall back to
    ``0.01 * mean(C)``, which keeps the Gibbs kernel well conditioned.  The
    solver functions themselves take an absolute epsilon.  ``p`` is the
    exponent of the 1-D solver.
    """

    solver: str = "exact"
    epsilon: float | None = None
    num_iterations: int = 1000
    max_err: float = 1e-9
    p: float = 2.0

    def __post_init__(self) -> None:
        if self.solver not in _SOLVERS:
            raise DataError(f"unknown solver {self.solver!r}; expected one of {_SOLVERS}")
        if self.epsilon is not None and not (self.epsilon > 0):
            raise DataError(f"epsilon must be positive, got {self.epsilon}")
        if self.num_iterations < 1:
            raise DataError("num_iterations must be >= 1")
        if not (self.max_err > 0):
            raise DataError("max_err must be positive")
        if not (self.p >= 1):
            raise DataError(f"1-D exponent p must be >= 1, got {self.p}")


@dataclass(frozen=True, eq=False)
class BootstrapTable:
    """Per-input original estimate, bootstrap bias and CI bounds."""

    original: np.ndarray
    bias: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray

    def __post_init__(self) -> None:
        for name in ("original", "bias", "ci_low", "ci_high"):
            object.__setattr__(self, name,
                               _frozen(np.asarray(getattr(self, name), dtype=np.float64)))
        if (self.ci_low > self.ci_high).any():
            raise DataError("confidence interval has ci_low > ci_high")


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    """Bootstrap summary: one table per statistic (index and components)."""

    replicate_count: int
    ci_type: str
    confidence: float
    stats: Mapping[str, BootstrapTable]

    def __post_init__(self) -> None:
        if self.replicate_count < 2:
            raise DataError("need at least 2 bootstrap replicates")
        if self.ci_type not in _CI_TYPES:
            raise DataError(f"unknown ci type {self.ci_type!r}; expected one of {_CI_TYPES}")
        if not 0 < self.confidence < 1:
            raise DataError(f"confidence must lie in (0, 1), got {self.confidence}")
        object.__setattr__(self, "stats", dict(self.stats))


@dataclass(frozen=True, eq=False)
class IndexEstimate:
    """Estimated sensitivity indices for every input of a dataset.

    ``indices[i]`` is the normalized index of input i.  ``separations`` holds
    the per-class transport costs divided by the normalizing bound, shape
    ``(d, H)``; ``representatives`` the matching per-class input means.
    ``components`` maps ``advective`` / ``diffusive`` (and ``residual`` for
    the exact squared-Euclidean decomposition) to per-input arrays.
    """

    method: str
    input_names: tuple[str, ...]
    indices: np.ndarray
    bound: float
    separations: np.ndarray
    representatives: np.ndarray
    components: Mapping[str, np.ndarray] | None = None
    converged: bool = True
    bootstrap: BootstrapResult | None = None

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.float64)
        if not self.bound > 0:
            raise DataError(f"normalizing bound must be positive, got {self.bound}")
        if idx.shape != (len(self.input_names),):
            raise DataError("one index per input required")
        if self.method in ("exact", "1d", "wass-bures") and (idx < 0).any():
            raise DataError(f"negative index from method {self.method!r}")
        object.__setattr__(self, "indices", _frozen(idx))
        object.__setattr__(self, "separations",
                           _frozen(np.asarray(self.separations, dtype=np.float64)))
        object.__setattr__(self, "representatives",
                           _frozen(np.asarray(self.representatives, dtype=np.float64)))
        if self.components is not None:
            frozen = {k: _frozen(np.asarray(v, dtype=np.float64))
                      for k, v in self.components.items()}
            object.__setattr__(self, "components", frozen)
            if self.method == "wass-bures":
                total = frozen["advective"] + frozen["diffusive"]
                if np.abs(total - idx).max() > 1e-12:
                    raise DataError("advective + diffusive must equal the index")
