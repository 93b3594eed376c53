"""Visibility of the Rabi oscillations: mechanical dephasing and damping.

Times are in seconds. With ``theta = zeta*omega0*t``:

* ``nu0`` is the thermally averaged overlap of the two conditioned mechanical
  evolutions (first order in zeta),
* ``nu_d`` is the extra attenuation from mechanical damping,
* ``P = 1/2 + Re[nu0 nu_d exp(-2i Delta t / hbar)] / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from .errors import ConsistencyError
from .params import CODATA, DerivedParams, DeviceParams, PhysicalConstants, thermal_factor
from .two_level import CouplingParams, TwoLevelModel

SINC_TAYLOR = 1e-4
SELF_CHECK_RTOL = 1e-8


def nu0_zero_T(t, zeta, omega0, alpha0):
    theta = zeta * omega0 * np.asarray(t, dtype=float)
    return np.exp(-0.5j * theta) * np.exp(-(alpha0**2) * (1.0 - np.exp(-1j * theta)))


def nu0_thermal(t, zeta, omega0, alpha0, n_thermal):
    """Closed form of the P-representation average.

    nu0 = e^{-i theta/2} exp[-(1 - e^{-i theta}) alpha0^2 / (1 + xi)] / (1 + xi),
    xi = (1 - e^{-i theta}) <n>.
    """
    theta = zeta * omega0 * np.asarray(t, dtype=float)
    q = -np.expm1(-1j * theta)
    one_xi = 1.0 + q * n_thermal
    return np.exp(-0.5j * theta) * np.exp(-q * alpha0**2 / one_xi) / one_xi


def nu0_thermal_quadrature(t, zeta, omega0, alpha0, n_thermal, nodes=240, half_width=9.0):
    """Direct 2D Gauss-Legendre quadrature of the coherent-state average.

    Integrates, with alpha = sqrt(<n>) (x + i y),

        e^{-i theta/2} / pi  *  int dx dy  exp(-(x^2 + y^2) - xi ((a0 + x)^2 + y^2))

    over the square ``[-half_width, half_width]^2``, where ``a0 = alpha0/sqrt(<n>)``.
    The integrand is bounded by ``exp(-x^2 - y^2)`` so the truncation error is
    below ``exp(-half_width^2)``. Requires ``n_thermal > 0``.
    """
    if n_thermal <= 0:
        raise ValueError("quadrature form needs n_thermal > 0")
    x, w = roots_legendre(nodes)
    x = x * half_width
    w = w * half_width
    X, Y = np.meshgrid(x, x, indexing="ij")
    W = np.outer(w, w)
    a0 = alpha0 / math.sqrt(n_thermal)
    base = -(X**2 + Y**2)
    radius2 = (a0 + X) ** 2 + Y**2
    out = []
    for theta in zeta * omega0 * np.atleast_1d(np.asarray(t, dtype=float)):
        xi = -np.expm1(-1j * theta) * n_thermal
        integral = np.sum(W * np.exp(base - xi * radius2))
        out.append(np.exp(-0.5j * theta) * integral / math.pi)
    out = np.array(out)
    return out if np.ndim(t) else out[0]


def self_check_thermal(zeta, omega0, alpha0, n_thermal, times, rtol=SELF_CHECK_RTOL):
    """Compare the closed form against the quadrature; raise on disagreement.

    Returns the largest relative deviation.
    """
    closed = nu0_thermal(times, zeta, omega0, alpha0, n_thermal)
    direct = nu0_thermal_quadrature(times, zeta, omega0, alpha0, n_thermal)
    rel = float(np.max(np.abs(closed - direct) / np.abs(direct)))
    if not rel < rtol:
        raise ConsistencyError(
            f"thermal closed form deviates from quadrature by {rel:.3g} (limit {rtol:g})"
        )
    return rel


def gamma_m(zeta, omega0, alpha0, n_thermal):
    """Short-time decoherence rate zeta alpha0 omega0 (1 + <n>/alpha0^2)^{1/2}."""
    return zeta * omega0 * math.sqrt(alpha0**2 + n_thermal)


def short_time_rate(zeta, omega0, alpha0, n_thermal):
    """Rate from the full variance of H(0) in the displaced thermal state.

    |nu0|^2 = 1 - (rate t)^2 + O(t^3) for the closed form above; the variance
    of the oscillator number is alpha0^2 (2<n> + 1) + <n>(<n> + 1). Equals
    :func:`gamma_m` at <n> = 0.
    """
    n = n_thermal
    return zeta * omega0 * math.sqrt(alpha0**2 * (2 * n + 1) + n * (n + 1))


def _one_minus_sinc(theta):
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < SINC_TAYLOR
    safe = np.where(small, 1.0, theta)
    series = theta**2 / 6.0 - theta**4 / 120.0
    return np.where(small, series, 1.0 - np.sin(safe) / safe)


def nu_d(t, zeta, omega0, alpha0, Q, thermal_factor):
    """exp[-(4 alpha0^2 omega0 t / Q) coth(...) (1 - sin(theta)/theta)]."""
    t = np.asarray(t, dtype=float)
    return np.exp(-damping_exponent(t, zeta, omega0, alpha0, Q, thermal_factor))


def damping_exponent(t, zeta, omega0, alpha0, Q, thermal_factor):
    t = np.asarray(t, dtype=float)
    theta = zeta * omega0 * t
    return 4.0 * alpha0**2 * omega0 * t / Q * thermal_factor * _one_minus_sinc(theta)


def first_peak_damping_exponent(zeta, alpha0, Q, thermal_factor):
    """-ln nu_d(t_1) = 8 pi alpha0^2 coth(...) / (zeta Q)."""
    return 8.0 * math.pi * alpha0**2 * thermal_factor / (zeta * Q)


def high_temperature_damping_exponent(zeta, Q, x0, lambda_T):
    """(4 pi / zeta Q) (x0 / lambda_T)^2, the hbar omega0 << k_B T limit of the above."""
    return 4.0 * math.pi / (zeta * Q) * (x0 / lambda_T) ** 2


def coherent_amplitudes(t, zeta, omega0, alpha0):
    """Mean coherent amplitudes (alpha_1, alpha_2) of the two conditioned evolutions."""
    t = np.asarray(t, dtype=float)
    a1 = alpha0 * np.exp(-1j * (1 + zeta / 2) * omega0 * t)
    a2 = alpha0 * np.exp(-1j * (1 - zeta / 2) * omega0 * t)
    return a1, a2


def gamma_d(omega0, Q, alpha1, alpha2, thermal_factor):
    """(2 omega0 / Q) |alpha1 - alpha2|^2 coth(hbar omega0 / 2 k_B T)."""
    return 2.0 * omega0 / Q * np.abs(np.asarray(alpha1) - np.asarray(alpha2)) ** 2 * thermal_factor


def rabi_probability(t, nu_total, delta, hbar=CODATA.hbar):
    """Probability of the prepared circulating-current state at time ``t``."""
    t = np.asarray(t, dtype=float)
    return 0.5 + 0.5 * np.real(np.asarray(nu_total) * np.exp(-2j * delta * t / hbar))


def recoherence_times(zeta, omega0, t_max):
    n = np.arange(1, int(math.floor(t_max * zeta * omega0 / (2 * math.pi) + 1e-9)) + 1)
    return 2.0 * math.pi * n / (zeta * omega0)


@dataclass(frozen=True)
class VisibilitySeries:
    times: np.ndarray
    nu0: np.ndarray
    nu_d: np.ndarray
    nu_total: np.ndarray
    p_state: np.ndarray
    metadata: dict = field(default_factory=dict)

    HEADER = ("t_seconds", "re_nu0", "im_nu0", "abs_nu0", "nu_d", "abs_nu", "P_state")

    def table(self) -> np.ndarray:
        return np.column_stack(
            [
                self.times,
                self.nu0.real,
                self.nu0.imag,
                np.abs(self.nu0),
                self.nu_d,
                np.abs(self.nu_total),
                self.p_state,
            ]
        )


def visibility_series(
    model: TwoLevelModel,
    coupling: CouplingParams,
    device: DeviceParams,
    derived: DerivedParams,
    t_max: float | None = None,
    num_points: int | None = None,
    constants: PhysicalConstants = CODATA,
    points_per_period: int = 2000,
) -> VisibilitySeries:
    """Sample nu0, nu_d, nu and P on a uniform grid over ``[0, t_max]``.

    Defaults: two recoherence periods, ``points_per_period`` samples each.
    """
    t_rec = coupling.t_recoherence
    if t_max is None:
        t_max = 2.0 * t_rec
    if not t_max > 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    if num_points is None:
        num_points = int(math.ceil(points_per_period * t_max / t_rec)) + 1
    zeta, w0, a0 = coupling.zeta, device.angular_frequency, coupling.alpha0
    coth = thermal_factor(device, constants)
    n = derived.n_thermal

    t = np.linspace(0.0, t_max, int(num_points))
    v0 = nu0_thermal(t, zeta, w0, a0, n)
    vd = nu_d(t, zeta, w0, a0, device.quality_factor, coth)
    v = v0 * vd
    p = rabi_probability(t, v, model.delta, constants.hbar)

    assert np.all(np.abs(v0) <= 1.0 + 1e-12)
    assert np.all((vd > 0) | (vd == 0.0)) and np.all(vd <= 1.0)
    assert np.all((p >= -1e-12) & (p <= 1.0 + 1e-12))

    peaks = []
    for j, tn in enumerate(recoherence_times(zeta, w0, t_max), start=1):
        d = float(nu_d(tn, zeta, w0, a0, device.quality_factor, coth))
        peaks.append(
            {
                "n": j,
                "t_seconds": float(tn),
                "nu_d": d,
                "abs_nu": float(abs(nu0_thermal(tn, zeta, w0, a0, n))) * d,
                "log_nu_d": -float(damping_exponent(tn, zeta, w0, a0, device.quality_factor, coth)),
            }
        )
    metadata = {
        "coupling": coupling.to_dict(),
        "temperature_K": device.temperature,
        "n_thermal": n,
        "thermal_factor": coth,
        "quality_factor": device.quality_factor,
        "delta_J": model.delta,
        "t_max_s": float(t_max),
        "num_points": int(num_points),
        "peaks": peaks,
    }
    return VisibilitySeries(t, v0, vd, v, p, metadata)
