"""Two-level reduction of the flux spectrum and the qubit-resonator couplings.

The two lowest flux levels are modelled by the traceless matrix

    [[eta*b, Delta], [Delta, -eta*b]]

whose eigenvalues +-sqrt(eta^2 b^2 + Delta^2) are compared with half the
solved splitting ``(lambda_1 - lambda_0)/2`` (energies measured from the
midpoint of the two levels).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, least_squares

from .errors import DegenerateModelError, NoDoubleWellError, TwoLevelInvalidError
from .flux_spectrum import FluxGrid, Spectrum, half_splitting, solve_eigen
from .params import CODATA, DerivedParams, DeviceParams, PhysicalConstants, zero_point_scale

LINEAR_REGIME = 5.0  # eta*b* >= 5 Delta
CROSSOVER = 2.0  # the fit window must reach eta*b >= 2 Delta
FD_STEP = 1e-3
FIT_SAMPLES = 40
ZETA_WARN = 0.05


@dataclass(frozen=True)
class TwoLevelModel:
    """Two-level parameters in joules.

    ``eta`` is the finite-difference slope of the half-splitting at
    ``bias_star``; ``eta_fit`` is the least-squares hyperbola slope over
    ``[0, fit_window]`` with ``fit_residual`` its largest relative deviation.
    """

    eta: float
    delta: float
    fit_window: float
    fit_residual: float
    gap_ratio: float
    eta_fit: float
    bias_star: float
    U0: float

    @property
    def eta_over_U0(self) -> float:
        return self.eta / self.U0

    @property
    def delta_over_U0(self) -> float:
        return self.delta / self.U0

    def to_dict(self) -> dict:
        d = asdict(self)
        return {
            "eta_J": d["eta"],
            "delta_J": d["delta"],
            "eta_over_U0": self.eta_over_U0,
            "delta_over_U0": self.delta_over_U0,
            "eta_fit_J": d["eta_fit"],
            "bias_star_rad": d["bias_star"],
            "fit_window_rad": d["fit_window"],
            "fit_residual": d["fit_residual"],
            "gap_ratio": d["gap_ratio"],
            "U0_J": d["U0"],
        }


def hyperbola(b, eta, delta):
    return np.sqrt((eta * np.asarray(b)) ** 2 + delta**2)


def extract_two_level(
    beta_L: float,
    beta_C: float,
    U0: float,
    grid: FluxGrid | None = None,
    solver: Callable[[float], Spectrum] | None = None,
    max_window: float = 0.5,
    residual_threshold: float = 1e-2,
) -> TwoLevelModel:
    """Fit eta and Delta to the solved flux spectrum.

    ``solver(bias)`` must return a :class:`Spectrum` with at least three
    levels; by default the grid eigensolver is used.
    """
    if beta_L <= 1.0:
        raise NoDoubleWellError(beta_L)
    if solver is None:

        def solver(b):
            return solve_eigen(grid, b, beta_L, beta_C, k=3)

    cache: dict[float, float] = {}

    def split(b):
        b = float(b)
        if b not in cache:
            cache[b] = half_splitting(solver(b))
        return cache[b]

    zero = solver(0.0)
    lam = zero.eigenvalues
    delta = 0.5 * float(lam[1] - lam[0])
    cache[0.0] = delta
    gap_ratio = float((lam[2] - lam[1]) / (lam[1] - lam[0]))

    def diag_part(b):
        # the eta*b term implied by the solved splitting
        return math.sqrt(max(split(b) ** 2 - delta**2, 0.0))

    if diag_part(max_window) >= LINEAR_REGIME * delta:
        b_star = brentq(lambda b: diag_part(b) - LINEAR_REGIME * delta, 0.0, max_window, xtol=1e-10)
    else:
        b_star = max_window
    b_star = min(b_star, max_window - FD_STEP)
    eta = (split(b_star + FD_STEP) - split(b_star - FD_STEP)) / (2.0 * FD_STEP)

    samples = np.linspace(0.0, max_window, FIT_SAMPLES + 1)
    values = np.array([split(b) for b in samples])
    implied = np.sqrt(np.maximum(values**2 - delta**2, 0.0))
    min_index = int(np.argmax(implied >= CROSSOVER * delta))
    if implied[min_index] < CROSSOVER * delta:
        raise TwoLevelInvalidError("splitting never leaves the tunnelling regime", gap_ratio)

    best = None
    for j in range(min_index, samples.size):
        b, v = samples[: j + 1], values[: j + 1]
        fit = least_squares(lambda p: hyperbola(b, p[0], delta) / v - 1.0, [eta])
        residual = float(np.max(np.abs(fit.fun)))
        if residual > residual_threshold:
            break
        best = (samples[j], abs(float(fit.x[0])), residual)
    if best is None:
        raise TwoLevelInvalidError(
            f"hyperbola fit residual exceeds {residual_threshold:g} already at "
            f"bias {samples[min_index]:.4g}",
            gap_ratio,
        )
    window, eta_fit, residual = best
    return TwoLevelModel(
        eta=eta * U0,
        delta=delta * U0,
        fit_window=float(window),
        fit_residual=residual,
        gap_ratio=gap_ratio,
        eta_fit=eta_fit * U0,
        bias_star=float(b_star),
        U0=U0,
    )


def mixing_angle(model: TwoLevelModel, bias: float) -> float:
    """theta in (0, pi) with tan(theta) = Delta / (eta * bias)."""
    return math.atan2(model.delta, model.eta * bias)


def eigenpair_2x2(model: TwoLevelModel, bias: float):
    """Return ``(eps_plus, eps_minus, ket_plus, ket_minus)`` at ``bias``."""
    theta = mixing_angle(model, bias)
    eps = math.hypot(model.eta * bias, model.delta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return eps, -eps, np.array([c, s]), np.array([-s, c])


def two_level_matrix(model: TwoLevelModel, bias: float) -> np.ndarray:
    eb = model.eta * bias
    return np.array([[eb, model.delta], [model.delta, -eb]])


def equilibrium_shift(model: TwoLevelModel, device: DeviceParams, derived: DerivedParams) -> float:
    """x0 = 2 pi eta / (m omega0^2 x_phi), metres."""
    k = device.effective_mass * device.angular_frequency**2
    return 2.0 * math.pi * model.eta / (k * derived.x_phi)


@dataclass(frozen=True)
class AdiabaticPotentials:
    """Harmonic mechanical potentials conditioned on the qubit state.

    ``centers``, ``stiffness`` and ``offsets`` are (plus, minus) pairs so that
    ``V_pm(x) = stiffness_pm/2 * (x - center_pm)^2 + offset_pm``.
    """

    regime: str
    centers: tuple
    stiffness: tuple
    offsets: tuple
    mass: float

    @property
    def frequencies(self):
        return tuple(math.sqrt(k / self.mass) for k in self.stiffness)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return tuple(
            0.5 * k * (x - c) ** 2 + o for c, k, o in zip(self.centers, self.stiffness, self.offsets)
        )


def adiabatic_potentials(
    model: TwoLevelModel,
    device: DeviceParams,
    derived: DerivedParams,
    regime: str = "prepared",
    zeta_warn: float = ZETA_WARN,
) -> AdiabaticPotentials:
    m, w0 = device.effective_mass, device.angular_frequency
    k = m * w0**2
    x0 = equilibrium_shift(model, device, derived)
    if regime == "prepared":
        phi_e = device.bias_phase
        shift = math.pi * x0 / derived.x_phi
        return AdiabaticPotentials(
            regime,
            centers=(-x0, x0),
            stiffness=(k, k),
            offsets=(-model.eta * (shift - phi_e), -model.eta * (shift + phi_e)),
            mass=m,
        )
    if regime == "quenched":
        zeta = k * x0**2 / model.delta
        if zeta >= zeta_warn:
            warnings.warn(
                f"zeta={zeta:.3g} >= {zeta_warn}: first-order-in-zeta results are inaccurate",
                RuntimeWarning,
                stacklevel=2,
            )
        return AdiabaticPotentials(
            regime,
            centers=(0.0, 0.0),
            stiffness=(k * (1 + zeta), k * (1 - zeta)),
            offsets=(model.delta, -model.delta),
            mass=m,
        )
    raise ValueError(f"regime must be 'prepared' or 'quenched', got {regime!r}")


@dataclass(frozen=True)
class CouplingParams:
    x0: float
    zeta: float
    alpha0: float
    t_recoherence: float
    gamma_m: float
    zener_exponent: float

    def to_dict(self) -> dict:
        return {
            "x0_m": self.x0,
            "zeta": self.zeta,
            "alpha0": self.alpha0,
            "t_recoherence_s": self.t_recoherence,
            "gamma_m_per_s": self.gamma_m,
            "zener_exponent": self.zener_exponent,
        }


def zener_exponent(x_phi, x0, beta_h, delta, eta, U0) -> float:
    """(x_phi / 2 x0 beta_h) (Delta^2 / eta U0); p_Z = exp(-exponent)."""
    return x_phi / (2.0 * x0 * beta_h) * delta**2 / (eta * U0)


def derive_coupling(
    model: TwoLevelModel,
    device: DeviceParams,
    derived: DerivedParams,
    constants: PhysicalConstants = CODATA,
) -> CouplingParams:
    if model.delta <= 0.0:
        raise DegenerateModelError("tunnel splitting Delta is zero")
    w0 = device.angular_frequency
    x0 = equilibrium_shift(model, device, derived)
    zeta = device.effective_mass * w0**2 * x0**2 / model.delta
    alpha0 = x0 * zero_point_scale(device, constants)
    return CouplingParams(
        x0=x0,
        zeta=zeta,
        alpha0=alpha0,
        t_recoherence=2.0 * math.pi / (zeta * w0),
        gamma_m=zeta * w0 * math.sqrt(alpha0**2 + derived.n_thermal),
        zener_exponent=zener_exponent(
            derived.x_phi, x0, derived.beta_h, model.delta, model.eta, derived.U0
        ),
    )
