"""Benchmark data generators: linear-Gaussian, budworm ODE, climate recursion."""
import math

import numpy as np
import pytest
from scipy import stats

from otsense import DataError, NumericalError
from otsense.models import (
    _BUDWORM_PARAMS,
    _CLIMATE_EMISSIONS,
    _bw_rhs,
    _bw_rk4,
    gen_budworm,
    gen_climate,
    gen_linear_gaussian,
)

A = np.array([[4.0, -2.0, 1.0], [2.0, 5.0, -1.0]])


def test_linear_gaussian_outputs_are_the_exact_linear_map():
    ds = gen_linear_gaussian(50, seed=2)
    np.testing.assert_allclose(ds.y.values, ds.x.values @ A.T, atol=1e-12)
    assert ds.x.names == ("X1", "X2", "X3")
    assert ds.y.names == ("Y1", "Y2")


def test_linear_gaussian_moments():
    ds = gen_linear_gaussian(100000, seed=3)
    x = ds.x.values
    np.testing.assert_allclose(x.mean(axis=0), [1.0, 1.0, 1.0], atol=0.02)
    want = np.full((3, 3), 0.5) + 0.5 * np.eye(3)
    np.testing.assert_allclose(np.cov(x.T), want, atol=0.02)


def test_linear_gaussian_seed_determinism():
    a = gen_linear_gaussian(20, seed=4)
    b = gen_linear_gaussian(20, seed=4)
    np.testing.assert_array_equal(a.x.values, b.x.values)


def _bw_param_row(**over):
    vals = {"r_b": 1.55, "K": 200.0, "beta": 30000.0, "alpha": 1.5,
            "r_s": 0.12, "K_s": 24000.0, "K_e": 1.1, "r_e": 0.95,
            "P": 0.0017, "T_e": 0.8}
    vals.update(over)
    return np.array([vals[name] for name, _, _ in _BUDWORM_PARAMS])


def test_budworm_equilibrium_is_a_fixed_point_of_the_integrator():
    # With consumption switched off (P = 0) the system has the equilibrium
    # S = K_s, E = K_e, B = K K_s K_e^2 / (T_e^2 + K_e^2): the predation term
    # vanishes because alpha**(2 K_s) overflows to infinity by construction.
    p = _bw_param_row(P=0.0)
    K, K_s, K_e, T_e = p[1], p[5], p[6], p[9]
    B = K * K_s * K_e**2 / (T_e**2 + K_e**2)
    dB, dS, dE = _bw_rhs(B, K_s, K_e, p, True)
    assert abs(dB) < 1e-6 * B
    assert abs(dS) < 1e-9
    assert dE == 0.0
    b1, s1, e1 = _bw_rk4(B, K_s, K_e, 0.1, p, True)
    assert b1 == pytest.approx(B, rel=1e-12)
    assert s1 == pytest.approx(K_s, rel=1e-12)
    assert e1 == pytest.approx(K_e, rel=1e-12)


def test_budworm_predation_forms_differ():
    p = _bw_param_row()
    d_code = _bw_rhs(5.0, 7.0, 1.0, p, True)
    d_disp = _bw_rhs(5.0, 7.0, 1.0, p, False)
    assert d_code[0] != d_disp[0]       # saturation denominators differ
    assert d_code[1] == d_disp[1]       # S and E dynamics are shared
    assert d_code[2] == d_disp[2]


def test_budworm_stride_cap_does_not_change_the_solution():
    times = np.arange(0.0, 61.0)
    a = gen_budworm(12, seed=5, times=times, step=0.1)
    b = gen_budworm(12, seed=5, times=times, step=0.05)
    for var in ("B", "S", "E"):
        va, vb = a.outputs[var].values, b.outputs[var].values
        scale = np.maximum(np.abs(va), 1e-8)
        assert (np.abs(va - vb) / scale).max() < 1e-4


def test_budworm_input_columns_are_uniform_on_their_ranges():
    # times = [0] skips integration entirely; only the draws are exercised
    ms = gen_budworm(10000, seed=6, times=[0.0])
    x = ms.x.values
    for j, (name, lo, hi) in enumerate(_BUDWORM_PARAMS):
        p = stats.kstest(x[:, j], "uniform", args=(lo, hi - lo)).pvalue
        assert p > 0.01, f"{name}: p={p}"
    assert ms.x.names[0] == "r_b"
    np.testing.assert_array_equal(ms.outputs["B"].values, np.full((10000, 1), 0.1))


def test_budworm_trajectories_are_finite_and_labeled():
    times = np.arange(0.0, 26.0)
    ms = gen_budworm(8, seed=7, times=times)
    b = ms.outputs["B"]
    assert b.values.shape == (8, 26)
    assert np.isfinite(b.values).all()
    assert (b.values > 0).all()
    assert b.names[0] == "B_0" and b.names[-1] == "B_25"
    ds = ms.dataset("B")
    assert ds.n == 8 and ds.d == 10 and ds.k == 26
    with pytest.raises(DataError, match="no output named"):
        ms.dataset("Q")


def test_budworm_divergence_is_reported_with_position():
    # an absurd initial density overflows immediately; the integrator gives
    # up below its minimum stride and names the first unreachable time
    with pytest.raises(NumericalError, match="at time 1 for input row 1"):
        gen_budworm(2, seed=8, times=[1.0], init=(1e300, 7.0, 1.0))


def test_budworm_argument_validation():
    with pytest.raises(DataError, match="n >= 2"):
        gen_budworm(1)
    with pytest.raises(DataError, match="predation_form"):
        gen_budworm(2, predation_form="other")
    with pytest.raises(DataError, match="times"):
        gen_budworm(2, times=[])
    with pytest.raises(DataError, match="times"):
        gen_budworm(2, times=[1.0, 1.0])
    with pytest.raises(DataError, match="times"):
        gen_budworm(2, times=[-1.0, 1.0])
    with pytest.raises(DataError, match="step"):
        gen_budworm(2, step=0.0)
    with pytest.raises(DataError, match="init"):
        gen_budworm(2, init=(0.0, 7.0, 1.0))
    with pytest.raises(DataError, match="init"):
        gen_budworm(2, init=(1.0, 7.0))


def _climate_oracle_row(p):
    # independent scalar re-implementation of the reservoir/temperature
    # recursion, kept deliberately plain
    phi11, phi23, c1, c3, c4, lam, s_eq, f0, f1 = p
    phi12 = 1.0 - phi11
    phi21 = phi12 * 588.0 / 360.0
    phi22 = 1.0 - phi21 - phi23
    phi32 = phi23 * 360.0 / 1720.0
    phi33 = 1.0 - phi32
    m_at, m_uo, m_lo = 851.0, 460.0, 1740.0
    t_at, t_oc = 0.85, 0.0068
    out = [t_at]
    for t in range(17):
        e = _CLIMATE_EMISSIONS[t]
        m_at_n = phi11 * m_at + phi21 * m_uo + 5.0 * e
        m_uo_n = phi12 * m_at + phi22 * m_uo + phi32 * m_lo
        m_lo_n = phi23 * m_uo + phi33 * m_lo
        f_ex = f0 + (f1 - f0) * t / 17.0
        force = lam * math.log(m_at / 588.0) / math.log(2.0) + f_ex
        t_at_n = t_at + c1 * (force - lam * t_at / s_eq - c3 * (t_at - t_oc))
        t_oc_n = t_oc + c4 * (t_at - t_oc)
        m_at, m_uo, m_lo = m_at_n, m_uo_n, m_lo_n
        t_at, t_oc = t_at_n, t_oc_n
        out.append(t_at)
    return np.array(out)


def test_climate_matches_independent_scalar_recursion():
    ds = gen_climate(40, seed=9)
    for i in (0, 7, 19, 39):
        want = _climate_oracle_row(ds.x.values[i])
        np.testing.assert_allclose(ds.y.values[i], want, rtol=1e-12, atol=1e-12)


def test_climate_initial_anomaly_and_shape():
    ds = gen_climate(30, seed=10)
    assert ds.y.values.shape == (30, 18)
    np.testing.assert_array_equal(ds.y.values[:, 0], np.full(30, 0.85))
    assert ds.y.names[0] == "T_AT_2015"
    assert ds.y.names[-1] == "T_AT_2100"
    assert ds.x.names == ("phi11", "phi23", "c1", "c3", "c4", "lambda", "S",
                          "F_EX0", "F_EX1")


def test_climate_warming_is_monotone_for_every_draw():
    ds = gen_climate(200, seed=11)
    assert (np.diff(ds.y.values, axis=1) > 0).all()
    assert np.isfinite(ds.y.values).all()


def test_climate_rejects_tiny_n():
    with pytest.raises(DataError, match="n >= 2"):
        gen_climate(1)
