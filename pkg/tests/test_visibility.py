import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from squidsim.errors import ConsistencyError
from squidsim.params import thermal_factor
from squidsim.visibility import (
    VisibilitySeries,
    coherent_amplitudes,
    damping_exponent,
    first_peak_damping_exponent,
    gamma_d,
    gamma_m,
    high_temperature_damping_exponent,
    nu0_thermal,
    nu0_thermal_quadrature,
    nu0_zero_T,
    nu_d,
    rabi_probability,
    recoherence_times,
    self_check_thermal,
    short_time_rate,
    visibility_series,
)

W0 = 2 * math.pi * 640e6


@settings(max_examples=20, deadline=None)
@given(
    alpha0=st.floats(0.0, 2.0),
    n=st.floats(0.01, 10.0),
    seed=st.integers(0, 2**31),
)
def test_closed_form_matches_quadrature(alpha0, n, seed):
    zeta = 1e-3
    t = np.random.default_rng(seed).uniform(0, 2 * 2 * math.pi / (zeta * W0), 20)
    closed = nu0_thermal(t, zeta, W0, alpha0, n)
    direct = nu0_thermal_quadrature(t, zeta, W0, alpha0, n)
    assert np.max(np.abs(closed - direct) / np.abs(direct)) < 1e-8


def test_self_check_raises_on_mismatch(monkeypatch):
    import squidsim.visibility as vis

    assert self_check_thermal(1e-3, W0, 0.3, 1.2, np.linspace(0, 1e-5, 5)) < 1e-8
    monkeypatch.setattr(vis, "nu0_thermal", lambda *a: 1.01 * nu0_thermal(*a))
    with pytest.raises(ConsistencyError):
        vis.self_check_thermal(1e-3, W0, 0.3, 1.2, np.linspace(0, 1e-5, 5))


def test_quadrature_needs_positive_occupation():
    with pytest.raises(ValueError):
        nu0_thermal_quadrature(0.0, 1e-3, W0, 0.2, 0.0)


def test_zero_temperature_limit():
    t = np.linspace(0, 1e-5, 50)
    np.testing.assert_allclose(nu0_thermal(t, 2.5e-4, W0, 0.18, 0.0), nu0_zero_T(t, 2.5e-4, W0, 0.18), atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    zeta=st.floats(1e-6, 0.05),
    alpha0=st.floats(0.0, 3.0),
    n=st.floats(0.0, 20.0),
    t=st.floats(0.0, 1e-3),
)
def test_unitarity_bound(zeta, alpha0, n, t):
    assert abs(nu0_thermal(t, zeta, W0, alpha0, n)) <= 1.0 + 1e-12


@settings(max_examples=100, deadline=None)
@given(
    zeta=st.floats(1e-5, 0.05),
    alpha0=st.floats(0.0, 3.0),
    n=st.floats(0.0, 20.0),
    k=st.integers(1, 50),
)
def test_full_recoherence(zeta, alpha0, n, k):
    tn = 2 * math.pi * k / (zeta * W0)
    assert abs(nu0_thermal(tn, zeta, W0, alpha0, n)) == pytest.approx(1.0, abs=1e-9)


def _curvature_rate(zeta, alpha0, n, theta=1e-4):
    # second-order central difference of |nu0|^2 about t = 0 (even in t)
    h = theta / (zeta * W0)
    f = lambda t: abs(nu0_thermal(t, zeta, W0, alpha0, n)) ** 2  # noqa: E731
    second = (f(h) - 2 * f(0.0) + f(-h)) / h**2
    return math.sqrt(-second / 2)


@pytest.mark.parametrize("alpha0", [0.05, 0.18, 1.0, 2.5])
def test_short_time_rate_zero_temperature(alpha0):
    zeta = 2.5e-4
    assert _curvature_rate(zeta, alpha0, 0.0) == pytest.approx(gamma_m(zeta, W0, alpha0, 0.0), rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(alpha0=st.floats(0.0, 2.0), n=st.floats(0.0, 10.0))
def test_short_time_rate_full_variance(alpha0, n):
    zeta = 2.5e-4
    if alpha0 == 0.0 and n == 0.0:
        return
    assert _curvature_rate(zeta, alpha0, n) == pytest.approx(short_time_rate(zeta, W0, alpha0, n), rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(
    zeta=st.floats(1e-5, 0.05),
    alpha0=st.floats(0.01, 2.0),
    Q=st.floats(10.0, 1e7),
    coth=st.floats(1.0, 30.0),
    frac=st.floats(1e-3, 3.0),
)
def test_rate_integrates_to_damping_exponent(zeta, alpha0, Q, coth, frac):
    t = frac * 2 * math.pi / (zeta * W0)

    def rate(s):
        a1, a2 = coherent_amplitudes(s, zeta, W0, alpha0)
        return float(gamma_d(W0, Q, a1, a2, coth))

    integral, _ = quad(rate, 0.0, t, epsabs=0.0, epsrel=1e-12, limit=500)
    # compare exponents; nu_d itself underflows for lossy parameters
    exponent = float(damping_exponent(t, zeta, W0, alpha0, Q, coth))
    assert integral == pytest.approx(exponent, rel=1e-6)
    assert nu_d(t, zeta, W0, alpha0, Q, coth) == pytest.approx(math.exp(-exponent), rel=1e-12)


def test_sinc_taylor_branch_continuous():
    zeta, a0, Q = 2.5e-4, 0.18, 1e4
    t_switch = 1e-4 / (zeta * W0)
    below = damping_exponent(t_switch * (1 - 1e-9), zeta, W0, a0, Q, 1.0)
    above = damping_exponent(t_switch * (1 + 1e-9), zeta, W0, a0, Q, 1.0)
    assert below == pytest.approx(above, rel=1e-6)
    assert damping_exponent(0.0, zeta, W0, a0, Q, 1.0) == 0.0


def test_first_peak_closed_form():
    zeta, a0, Q, coth = 2.5e-4, 0.18, 1e4, 3.36
    t1 = 2 * math.pi / (zeta * W0)
    assert damping_exponent(t1, zeta, W0, a0, Q, coth) == pytest.approx(
        first_peak_damping_exponent(zeta, a0, Q, coth), rel=1e-12
    )


def test_high_temperature_limit(device, derived, coupling):
    hot = device.with_(temperature=50.0)
    from squidsim.params import derive

    d = derive(hot)
    exact = first_peak_damping_exponent(coupling.zeta, coupling.alpha0, hot.quality_factor, thermal_factor(hot))
    approx = high_temperature_damping_exponent(coupling.zeta, hot.quality_factor, coupling.x0, d.lambda_T)
    assert approx == pytest.approx(exact, rel=1e-3)


def test_recoherence_times():
    t = recoherence_times(1e-3, 1.0, 2 * 2 * math.pi / 1e-3)
    np.testing.assert_allclose(t, [2 * math.pi / 1e-3, 4 * math.pi / 1e-3])


def test_rabi_probability_bounds():
    t = np.linspace(0, 1e-9, 100)
    p = rabi_probability(t, np.full(100, 0.5), 1e-24)
    assert np.all((p >= 0.25) & (p <= 0.75))
    assert rabi_probability(0.0, 1.0, 1e-24) == 1.0


@pytest.fixture(scope="module")
def series(model, coupling, device, derived):
    return visibility_series(model, coupling, device, derived)


def test_series_layout(series, coupling):
    assert series.table().shape == (4001, len(VisibilitySeries.HEADER))
    assert series.times[-1] == pytest.approx(2 * coupling.t_recoherence)
    np.testing.assert_allclose(series.nu_total, series.nu0 * series.nu_d)


def test_series_peaks(series, coupling):
    peaks = series.metadata["peaks"]
    assert [p["n"] for p in peaks] == [1, 2]
    assert peaks[0]["t_seconds"] == pytest.approx(coupling.t_recoherence)
    assert peaks[0]["abs_nu"] == pytest.approx(peaks[0]["nu_d"], rel=1e-9)
    assert peaks[1]["log_nu_d"] == pytest.approx(2 * peaks[0]["log_nu_d"], rel=1e-9)


def test_undamped_limit(model, coupling, device, derived):
    s = visibility_series(model, coupling, device.with_(quality_factor=1e12), derived)
    assert s.metadata["peaks"][0]["abs_nu"] == pytest.approx(1.0, abs=1e-7)


def test_series_rejects_bad_tmax(model, coupling, device, derived):
    with pytest.raises(ValueError):
        visibility_series(model, coupling, device, derived, t_max=0.0)
