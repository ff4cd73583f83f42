"""Benchmark data generators.

Three synthetic studies used throughout the tests and demos:

* ``gen_linear_gaussian`` -- a bivariate linear map of a correlated Gaussian
  triple, the standard analytically tractable testbed.
* ``gen_budworm`` -- a three-state insect-outbreak / forest ODE (budworm
  density B, branch surface S, foliage energy E) with ten uniformly drawn
  parameters, integrated by error-controlled RK4 and sampled on a monthly
  grid.
* ``gen_climate`` -- a discrete-time carbon-cycle / temperature recursion
  (three carbon reservoirs, two temperature layers) over 18 five-year
  periods with nine uniformly drawn parameters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .data import SampleMatrix, SensitivityDataset, validate_dataset
from .errors import DataError, NumericalError

# linear-Gaussian study: Y = A X with X ~ N(mu, Sigma)
_LG_A = np.array([[4.0, -2.0, 1.0],
                  [2.0, 5.0, -1.0]])
_LG_MU = np.array([1.0, 1.0, 1.0])
_LG_SIGMA = np.array([[1.0, 0.5, 0.5],
                      [0.5, 1.0, 0.5],
                      [0.5, 0.5, 1.0]])

_BUDWORM_PARAMS = (
    ("r_b", 1.52, 1.6),
    ("K", 100.0, 355.0),
    ("beta", 20000.0, 43200.0),
    ("alpha", 1.0, 2.0),
    ("r_s", 0.095, 0.15),
    ("K_s", 24000.0, 25440.0),
    ("K_e", 1.0, 1.2),
    ("r_e", 0.92, 1.0),
    ("P", 0.0015, 0.00195),
    ("T_e", 0.7, 0.9),
)

_CLIMATE_PARAMS = (
    ("phi11", 0.704, 1.056),
    ("phi23", 0.0056, 0.0084),
    ("c1", 0.0804, 0.1206),
    ("c3", 0.0704, 0.1056),
    ("c4", 0.02, 0.03),
    ("lambda", 2.94504, 4.41756),
    ("S", 2.48, 3.72),
    ("F_EX0", 0.4, 0.6),
    ("F_EX1", 0.8, 1.2),
)

# industrial emissions per 5-year period, GtC
_CLIMATE_EMISSIONS = np.array([
    35.74, 33.22, 35.26, 36.96, 38.28, 39.19, 39.67, 39.70, 39.29,
    38.43, 37.12, 35.38, 33.22, 30.65, 27.71, 24.40, 20.76, 16.82,
]) / 3.666


@dataclass(frozen=True, eq=False)
class ModelSample:
    """Inputs plus one output matrix per observed state variable."""

    x: SampleMatrix
    outputs: dict[str, SampleMatrix]

    def dataset(self, output: str) -> SensitivityDataset:
        if output not in self.outputs:
            raise DataError(f"no output named {output!r}; "
                            f"available: {sorted(self.outputs)}")
        return SensitivityDataset(self.x, self.outputs[output])


def gen_linear_gaussian(n: int, seed: int = 0) -> SensitivityDataset:
    """Sample (X, Y) with X ~ N((1,1,1), Sigma) and Y = A X.

    Sigma has unit variances and 0.5 correlations; A maps the three inputs
    to two outputs (4, -2, 1) and (2, 5, -1).
    """
    if n < 2:
        raise DataError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 3))
    x = _LG_MU + z @ np.linalg.cholesky(_LG_SIGMA).T
    y = x @ _LG_A.T
    return validate_dataset(x, y, x_names=("X1", "X2", "X3"),
                            y_names=("Y1", "Y2"))


@numba.njit(cache=True)
def _bw_rhs(B, S, E, p, code_form):
    r_b, K, beta, alpha, r_s, K_s, K_e, r_e, P, T_e = (
        p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9])
    e_sq = E * E
    t_sq = T_e * T_e + e_sq
    if code_form:
        # alpha**S overflows to inf once S grows; predation then vanishes,
        # which is the intended behaviour of this parametrization
        den = np.exp(2.0 * S * np.log(alpha)) + B * B
    else:
        den = (alpha * S) ** 2 + B * B
    dB = r_b * B * (1.0 - B * t_sq / (K * S * e_sq)) - beta * B * B / den
    dS = r_s * S * (1.0 - S * K_e / (E * K_s))
    dE = r_e * E * (1.0 - E / K_e) - P * (B / S) * e_sq / t_sq
    return dB, dS, dE


@numba.njit(cache=True)
def _bw_rk4(B, S, E, h, p, code_form):
    k1b, k1s, k1e = _bw_rhs(B, S, E, p, code_form)
    k2b, k2s, k2e = _bw_rhs(B + 0.5 * h * k1b, S + 0.5 * h * k1s,
                            E + 0.5 * h * k1e, p, code_form)
    k3b, k3s, k3e = _bw_rhs(B + 0.5 * h * k2b, S + 0.5 * h * k2s,
                            E + 0.5 * h * k2e, p, code_form)
    k4b, k4s, k4e = _bw_rhs(B + h * k3b, S + h * k3s, E + h * k3e,
                            p, code_form)
    c = h / 6.0
    return (B + c * (k1b + 2.0 * (k2b + k3b) + k4b),
            S + c * (k1s + 2.0 * (k2s + k3s) + k4s),
            E + c * (k1e + 2.0 * (k2e + k3e) + k4e))


@numba.njit(cache=True)
def _bw_row(p, code_form, init, times, hmax, out, row):
    """Integrate one parameter draw, writing states at each grid time.

    Returns 0 on success, or 1-based index into ``times`` of the first
    unreachable grid point.
    """
    rtol = 1e-8
    atol = 1e-10
    B, S, E = init[0], init[1], init[2]
    t = 0.0
    h = hmax
    for idx in range(times.size):
        target = times[idx]
        while target - t > 1e-12 * (1.0 + target):
            if h > target - t:
                h = target - t
            while True:
                # one full step against two half steps (step doubling)
                b1, s1, e1 = _bw_rk4(B, S, E, h, p, code_form)
                bm, sm, em = _bw_rk4(B, S, E, 0.5 * h, p, code_form)
                b2, s2, e2 = _bw_rk4(bm, sm, em, 0.5 * h, p, code_form)
                ok = (np.isfinite(b1) and np.isfinite(s1) and np.isfinite(e1)
                      and np.isfinite(b2) and np.isfinite(s2)
                      and np.isfinite(e2))
                err = np.inf
                if ok:
                    db = abs(b2 - b1) / (atol + rtol * max(abs(B), abs(b2)))
                    ds = abs(s2 - s1) / (atol + rtol * max(abs(S), abs(s2)))
                    de = abs(e2 - e1) / (atol + rtol * max(abs(E), abs(e2)))
                    err = max(db, max(ds, de)) / 15.0
                if err <= 1.0:
                    B = b2 + (b2 - b1) / 15.0
                    S = s2 + (s2 - s1) / 15.0
                    E = e2 + (e2 - e1) / 15.0
                    t += h
                    fac = 5.0 if err < 5e-4 else 0.9 * err ** -0.2
                    h = min(h * fac, hmax)
                    break
                h *= 0.5
                if h < 1e-10:
                    return idx + 1
        out[row, 0, idx] = B
        out[row, 1, idx] = S
        out[row, 2, idx] = E
    return 0


@numba.njit(cache=True)
def _bw_all(x, code_form, init, times, hmax, out):
    for row in range(x.shape[0]):
        bad = _bw_row(x[row], code_form, init, times, hmax, out, row)
        if bad != 0:
            return row + 1, bad
    return 0, 0


def gen_budworm(n: int, seed: int = 0, times=None, step: float = 0.1,
                predation_form: str = "code",
                init: tuple[float, float, float] = (0.1, 7.0, 1.0)) -> ModelSample:
    """Simulate the budworm-forest ODE for n uniform parameter draws.

    States: budworm density B (starts 0.1), branch surface S (starts 7),
    foliage energy E (starts 1).  RK4 with ``step`` (default 0.1 month) as
    the largest allowed stride; within it the stride adapts by step-doubling
    error control, since the predation term makes low-alpha draws stiff near
    t = 0 (the relative state tolerance is 1e-8).

    ``predation_form`` selects the saturation denominator of the predation
    term: "code" uses ``(alpha**S)**2 + B**2``, "displayed" uses
    ``(alpha*S)**2 + B**2``.
    """
    if n < 2:
        raise DataError(f"need n >= 2, got {n}")
    if predation_form not in ("code", "displayed"):
        raise DataError(f"unknown predation_form {predation_form!r}")
    times = np.arange(151.0) if times is None else np.asarray(times, dtype=np.float64)
    if times.size < 1 or (np.diff(times) <= 0).any() or times[0] < 0:
        raise DataError("times must be non-empty, non-negative and strictly increasing")
    if not step > 0:
        raise DataError(f"step must be positive, got {step}")
    init_arr = np.asarray(init, dtype=np.float64)
    if init_arr.shape != (3,) or not np.isfinite(init_arr).all() or (init_arr <= 0).any():
        raise DataError("init must be three positive finite values (B, S, E)")

    rng = np.random.default_rng(seed)
    names = tuple(name for name, _, _ in _BUDWORM_PARAMS)
    lo = np.array([a for _, a, _ in _BUDWORM_PARAMS])
    hi = np.array([b for _, _, b in _BUDWORM_PARAMS])
    x = rng.uniform(lo, hi, size=(n, len(names)))

    out = np.empty((n, 3, times.size))
    row, bad = _bw_all(x, predation_form == "code", init_arr, times,
                       float(step), out)
    if row != 0:
        raise NumericalError(f"non-finite budworm state at time "
                             f"{times[bad - 1]:g} for input row {row}")

    def label(var: str) -> tuple[str, ...]:
        return tuple(f"{var}_{t:g}" for t in times)

    xs = SampleMatrix(x, names)
    return ModelSample(xs, {
        "B": SampleMatrix(np.ascontiguousarray(out[:, 0]), label("B")),
        "S": SampleMatrix(np.ascontiguousarray(out[:, 1]), label("S")),
        "E": SampleMatrix(np.ascontiguousarray(out[:, 2]), label("E")),
    })


def gen_climate(n: int, seed: int = 0) -> SensitivityDataset:
    """Simulate the carbon-cycle / temperature recursion.

    Three carbon reservoirs (atmosphere, upper and lower ocean) exchange
    mass through a column-stochastic-style matrix derived from phi11 and
    phi23; radiative forcing follows the atmospheric reservoir plus an
    exogenous ramp; two temperature layers relax toward the forcing.  The
    output is atmospheric temperature over the 18 periods 2015..2100.
    """
    if n < 2:
        raise DataError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    names = tuple(name for name, _, _ in _CLIMATE_PARAMS)
    lo = np.array([a for _, a, _ in _CLIMATE_PARAMS])
    hi = np.array([b for _, _, b in _CLIMATE_PARAMS])
    x = rng.uniform(lo, hi, size=(n, len(names)))
    phi11, phi23, c1, c3, c4, lam, S, f_ex0, f_ex1 = (x[:, i] for i in range(9))

    phi12 = 1.0 - phi11
    phi21 = phi12 * 588.0 / 360.0
    phi22 = 1.0 - phi21 - phi23
    phi32 = phi23 * 360.0 / 1720.0
    phi33 = 1.0 - phi32

    m_at = np.full(n, 851.0)
    m_uo = np.full(n, 460.0)
    m_lo = np.full(n, 1740.0)
    t_at = np.full(n, 0.85)
    t_oc = np.full(n, 0.0068)

    periods = _CLIMATE_EMISSIONS.size
    out = np.empty((n, periods))
    out[:, 0] = t_at  # first period reports the initial anomaly
    log2 = np.log(2.0)
    # one update per remaining period; the last emissions entry is never
    # consumed and the exogenous-forcing ramp stops one share short of F_EX1
    for t in range(periods - 1):
        e = _CLIMATE_EMISSIONS[t]
        m_at_next = phi11 * m_at + phi21 * m_uo + 5.0 * e
        m_uo_next = phi12 * m_at + phi22 * m_uo + phi32 * m_lo
        m_lo_next = phi23 * m_uo + phi33 * m_lo
        if (m_at <= 0).any():
            row = int(np.argmax(m_at <= 0))
            raise NumericalError(f"atmospheric carbon became non-positive at "
                                 f"period {t + 1} for input row {row + 1}")
        f_ex = f_ex0 + (f_ex1 - f_ex0) * (t / (periods - 1.0))
        forcing = lam * np.log(m_at / 588.0) / log2 + f_ex
        t_at_next = t_at + c1 * (forcing - lam * t_at / S - c3 * (t_at - t_oc))
        t_oc_next = t_oc + c4 * (t_at - t_oc)
        m_at, m_uo, m_lo = m_at_next, m_uo_next, m_lo_next
        t_at, t_oc = t_at_next, t_oc_next
        out[:, t + 1] = t_at

    if not np.isfinite(out).all():
        raise NumericalError("non-finite climate state")
    y_names = tuple(f"T_AT_{2015 + 5 * t}" for t in range(periods))
    return SensitivityDataset(SampleMatrix(x, names), SampleMatrix(out, y_names))
