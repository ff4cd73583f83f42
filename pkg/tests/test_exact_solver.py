"""Transportation-simplex solver against two independent references."""
import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from otsense import DataError
from otsense.solvers.exact import solve_exact


def _permutation_optimum(C):
    """Brute-force optimum for uniform n-to-n problems (Birkhoff vertices)."""
    n = C.shape[0]
    best = np.inf
    for perm in itertools.permutations(range(n)):
        best = min(best, sum(C[i, perm[i]] for i in range(n)))
    return best / n


def _linprog_optimum(C, a, b):
    """Reference optimum from scipy's HiGHS LP solver."""
    n, m = C.shape
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    res = linprog(C.ravel(), A_eq=a_eq, b_eq=np.concatenate([a, b]),
                  bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def test_matches_permutation_optimum_on_uniform_square_problems():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(2, 7))
        C = rng.uniform(0.0, 10.0, (n, n))
        w = np.full(n, 1.0 / n)
        out = solve_exact(C, w, w)
        worst = max(worst, abs(out.cost - _permutation_optimum(C)))
    assert worst < 1e-12


def test_matches_linprog_on_general_rectangular_problems():
    rng = np.random.default_rng(12)
    for _ in range(30):
        n, m = int(rng.integers(2, 9)), int(rng.integers(2, 9))
        C = rng.uniform(0.0, 5.0, (n, m))
        a = rng.uniform(0.1, 1.0, n)
        a /= a.sum()
        b = rng.uniform(0.1, 1.0, m)
        b /= b.sum()
        out = solve_exact(C, a, b)
        assert out.cost == pytest.approx(_linprog_optimum(C, a, b), abs=1e-9)


def test_plan_is_a_feasible_coupling():
    rng = np.random.default_rng(13)
    C = rng.uniform(0.0, 1.0, (6, 9))
    a = np.full(6, 1 / 6)
    b = rng.uniform(0.5, 1.5, 9)
    b /= b.sum()
    out = solve_exact(C, a, b)
    P = out.plan.coupling
    assert (P >= 0).all()
    np.testing.assert_allclose(P.sum(axis=1), a, atol=1e-12)
    np.testing.assert_allclose(P.sum(axis=0), b, atol=1e-12)
    assert out.cost == pytest.approx(float((P * C).sum()), abs=1e-12)
    assert out.converged


def test_want_plan_false_returns_cost_only():
    C = np.array([[0.0, 1.0], [1.0, 0.0]])
    out = solve_exact(C, [0.5, 0.5], [0.5, 0.5], want_plan=False)
    assert out.plan is None
    assert out.cost == 0.0


def test_degenerate_ties_in_integer_costs():
    # many equal-cost cells force degenerate pivots; optimum is still exact
    C = np.array([[1.0, 1.0, 2.0],
                  [1.0, 2.0, 1.0],
                  [2.0, 1.0, 1.0]])
    w = np.full(3, 1 / 3)
    out = solve_exact(C, w, w)
    assert out.cost == pytest.approx(1.0, abs=1e-14)


def test_zero_mass_rows_are_handled():
    C = np.arange(12.0).reshape(3, 4)
    a = np.array([0.5, 0.0, 0.5])
    b = np.full(4, 0.25)
    out = solve_exact(C, a, b)
    np.testing.assert_allclose(out.plan.coupling.sum(axis=1), a, atol=1e-12)
    assert out.cost == pytest.approx(_linprog_optimum(C, a, b), abs=1e-9)


def test_identity_problem_costs_nothing():
    C = np.array([[0.0, 7.0], [7.0, 0.0]])
    out = solve_exact(C, [0.3, 0.7], [0.3, 0.7])
    assert out.cost == 0.0
    np.testing.assert_allclose(out.plan.coupling, np.diag([0.3, 0.7]), atol=1e-15)


def test_validation_rejects_bad_problems():
    C = np.zeros((2, 2))
    with pytest.raises(DataError, match="infeasible marginals"):
        solve_exact(C, [0.5, 0.6], [0.5, 0.5])
    with pytest.raises(DataError, match="does not match"):
        solve_exact(C, [0.5, 0.5], [1.0])
    with pytest.raises(DataError, match="non-negative"):
        solve_exact(np.array([[0.0, -1.0], [1.0, 0.0]]), [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(DataError, match="finite"):
        solve_exact(np.array([[np.inf, 0.0], [0.0, 0.0]]), [0.5, 0.5], [0.5, 0.5])
