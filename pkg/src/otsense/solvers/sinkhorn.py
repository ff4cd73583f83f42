"""Entropy-regularized optimal transport (Sinkhorn iterations).

``solve_sinkhorn`` is the textbook kernel form: build the Gibbs kernel
``K = exp(-C / epsilon)`` and alternate the scaling updates

    v <- b / (K^T u),    u <- a / (K v).

It is fast but breaks down when ``C / epsilon`` is large enough to underflow
the kernel; that condition is reported as an error rather than silently
producing garbage.  ``solve_sinkhorn_stable`` runs the same fixed-point in a
log-stabilized form: the dual potentials (f, g) absorb the scaling vectors
whenever they drift toward overflow, so the kernel entries stay O(1), and an
optional epsilon-scaling schedule warm-starts the potentials from a sequence
of halved regularizers.  Both report the transport cost <P, C> and the
regularized objective <P, C> + epsilon * KL(P | a x b).
"""
from __future__ import annotations

import numpy as np

from ..data import TransportPlan
from ..errors import DataError, NumericalError
from .common import validate_problem
from .outcome import SolveOutcome

# absorb scalings into the potentials when they leave this magnitude band
_ABSORB_HI = 1e30
_ABSORB_LO = 1e-30
_CHECK_EVERY = 10


def _kl_term(P: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = a[:, None] * b[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        term = P * np.log(P / ab)
    return float(np.where(P > 0, term, 0.0).sum())


def _finish(C, a, b, P, iterations, err, converged, epsilon, want_plan, max_err):
    cost = float((P * C).sum())
    reg = cost + epsilon * _kl_term(P, a, b)
    plan = None
    if want_plan:
        plan = TransportPlan(P, a, b, tol=max(2.0 * err, max_err, 1e-9))
    return SolveOutcome(cost=cost, plan=plan, iterations=iterations,
                        marginal_err=err, converged=converged,
                        regularized_cost=reg)


def solve_sinkhorn(C, a, b, epsilon: float, num_iterations: int = 1000,
                   max_err: float = 1e-9, want_plan: bool = True) -> SolveOutcome:
    """Entropic transport cost via the plain Gibbs-kernel iteration.

    Parameters
    ----------
    C : array_like, shape (n, m)
        Non-negative finite cost matrix.
    a, b : array_like
        Marginals, non-negative, each summing to 1 within 1e-12.
    epsilon : float
        Absolute entropic regularization strength.
    num_iterations : int
        Sweep budget; running out leaves ``converged=False``.
    max_err : float
        L1 marginal error at which iteration stops.

    Raises
    ------
    NumericalError
        If ``exp(-C / epsilon)`` underflows so badly that some row or column
        of the kernel needed by a positive-mass atom is identically zero, or
        the scalings blow up mid-iteration.  Use ``solve_sinkhorn_stable``
        (or a larger epsilon) in that regime.
    """
    C, a, b = validate_problem(C, a, b)
    if not epsilon > 0:
        raise DataError(f"epsilon must be positive, got {epsilon}")

    K = np.exp(C / -epsilon)
    dead_row = (K.max(axis=1) == 0.0) & (a > 0)
    dead_col = (K.max(axis=0) == 0.0) & (b > 0)
    if dead_row.any() or dead_col.any():
        raise NumericalError(
            f"Gibbs kernel underflow at epsilon={epsilon:g} (max cost "
            f"{C.max():g}); use solve_sinkhorn_stable or a larger epsilon")
    Kt = np.ascontiguousarray(K.T)

    u = np.ones_like(a)
    v = np.ones_like(b)
    err = np.inf
    converged = False
    it = 0
    while it < num_iterations:
        it += 1
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            v = np.where(b > 0, b / (Kt @ u), 0.0)
            u = np.where(a > 0, a / (K @ v), 0.0)
        if not (np.isfinite(u).all() and np.isfinite(v).all()):
            raise NumericalError(
                f"Sinkhorn scalings overflowed at iteration {it} "
                f"(epsilon={epsilon:g}); use solve_sinkhorn_stable")
        if it % _CHECK_EVERY == 0 or it == num_iterations:
            # the u-update enforces row marginals; measure the column side
            err = float(np.abs(v * (Kt @ u) - b).sum())
            if err <= max_err:
                converged = True
                break

    P = u[:, None] * K * v[None, :]
    return _finish(C, a, b, P, it, err, converged, epsilon, want_plan, max_err)


def _eps_schedule(epsilon: float, spread: float) -> list[float]:
    """Halving schedule from ~spread/8 down to the target epsilon."""
    levels = [epsilon]
    e = epsilon
    while e * 2.0 < spread / 8.0 and len(levels) < 60:
        e *= 2.0
        levels.append(e)
    return levels[::-1]


def solve_sinkhorn_stable(C, a, b, epsilon: float, num_iterations: int = 1000,
                          max_err: float = 1e-9, want_plan: bool = True,
                          eps_scaling: bool = True) -> SolveOutcome:
    """Log-domain stabilized Sinkhorn; immune to kernel underflow.

    Same fixed point and reporting as :func:`solve_sinkhorn`.  The scaling
    vectors are absorbed into dual potentials whenever they leave a safe
    magnitude band, and with ``eps_scaling`` the final regularizer is
    approached through a halving schedule that warm-starts the potentials.
    Exhausting ``num_iterations`` returns ``converged=False`` (never an
    exception): the best available plan is still reported.
    """
    C, a, b = validate_problem(C, a, b)
    if not epsilon > 0:
        raise DataError(f"epsilon must be positive, got {epsilon}")

    # zero-mass atoms get no potential: solve on the support, embed after
    sup_a = a > 0
    sup_b = b > 0
    Cs = np.ascontiguousarray(C[np.ix_(sup_a, sup_b)])
    asz = a[sup_a]
    bsz = b[sup_b]
    ns, ms = Cs.shape

    spread = float(Cs.max() - Cs.min())
    levels = _eps_schedule(epsilon, spread) if eps_scaling else [epsilon]

    f = np.zeros(ns)
    g = np.zeros(ms)
    total_it = 0
    err = np.inf
    converged = False

    for lev, eps_l in enumerate(levels):
        last = lev == len(levels) - 1
        # intermediate levels only warm-start: loose tolerance, small caps,
        # and never more than half the global budget in total
        tol_l = max_err if last else max(max_err, 1e-3)
        if not last and total_it >= num_iterations // 2:
            continue
        cap = num_iterations if last else min(100, num_iterations)

        logK = (f[:, None] + g[None, :] - Cs) / eps_l
        K = np.exp(logK)
        Kt = np.ascontiguousarray(K.T)
        u = np.ones(ns)
        v = np.ones(ms)
        level_it = 0
        while level_it < cap and total_it < num_iterations:
            level_it += 1
            total_it += 1
            v = bsz / (Kt @ u)
            u = asz / (K @ v)
            big = max(u.max(), v.max())
            small = min(u.min(), v.min())
            if not np.isfinite(big) or big > _ABSORB_HI or small < _ABSORB_LO:
                with np.errstate(divide="ignore"):
                    f = f + eps_l * np.log(np.maximum(u, 1e-300))
                    g = g + eps_l * np.log(np.maximum(v, 1e-300))
                logK = (f[:, None] + g[None, :] - Cs) / eps_l
                K = np.exp(logK)
                Kt = np.ascontiguousarray(K.T)
                u = np.ones(ns)
                v = np.ones(ms)
                continue
            if level_it % _CHECK_EVERY == 0 or level_it == cap or total_it == num_iterations:
                err = float(np.abs(v * (Kt @ u) - bsz).sum())
                if err <= tol_l:
                    break
        f = f + eps_l * np.log(np.maximum(u, 1e-300))
        g = g + eps_l * np.log(np.maximum(v, 1e-300))

    Ps = np.exp((f[:, None] + g[None, :] - Cs) / epsilon)
    P = np.zeros_like(C)
    P[np.ix_(sup_a, sup_b)] = Ps
    # refresh the reported error from the final plan on both sides
    err = float(max(np.abs(P.sum(axis=1) - a).sum(), np.abs(P.sum(axis=0) - b).sum()))
    converged = err <= max_err
    return _finish(C, a, b, P, total_it, err, converged, epsilon, want_plan, max_err)
