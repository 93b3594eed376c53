"""Physical constants, device inputs and the derived dimensionless groups.

All quantities are SI. The flux bias is stored as the dimensionless offset
``bias_phase`` from the half-flux-quantum point, i.e.
``2*pi*Phi_e/Phi_0 = pi + bias_phase``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from scipy import constants as _codata

from .errors import ParameterDomainError, UndefinedQuantityError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _codata.hbar
    electron_charge: float = _codata.e
    boltzmann: float = _codata.k

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ParameterDomainError(f.name, v, "finite and > 0")

    @property
    def flux_quantum(self) -> float:
        """h / 2e."""
        return 2.0 * math.pi * self.hbar / (2.0 * self.electron_charge)

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalConstants":
        return cls(**{k: float(v) for k, v in data.items()})


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class DeviceParams:
    loop_inductance: float
    junction_capacitance: float
    critical_current: float
    effective_mass: float
    angular_frequency: float
    field_length_product: float
    quality_factor: float
    temperature: float
    bias_phase: float = 0.0

    _POSITIVE = (
        "loop_inductance",
        "junction_capacitance",
        "critical_current",
        "effective_mass",
        "angular_frequency",
        "field_length_product",
        "quality_factor",
    )

    def __post_init__(self):
        for name in self._POSITIVE:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterDomainError(name, v, "finite and > 0")
        if not (math.isfinite(self.temperature) and self.temperature >= 0):
            raise ParameterDomainError("temperature", self.temperature, "finite and >= 0")
        if not math.isfinite(self.bias_phase):
            raise ParameterDomainError("bias_phase", self.bias_phase, "finite")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "DeviceParams":
        return cls(**{k: float(v) for k, v in data.items()})

    def with_(self, **changes) -> "DeviceParams":
        return replace(self, **changes)


def reference_device() -> DeviceParams:
    """The worked-example device (loop of ~10 um radius, 640 MHz beam, 50 mK)."""
    return DeviceParams(
        loop_inductance=6.5e-11,
        junction_capacitance=7.4e-17,
        critical_current=10e-6,
        effective_mass=1e-16,
        angular_frequency=2 * math.pi * 640e6,
        field_length_product=1e-6,
        quality_factor=1e4,
        temperature=0.05,
        bias_phase=0.0,
    )


@dataclass(frozen=True)
class DerivedParams:
    """Energy scale and dimensionless groups.

    ``lambda_T`` is ``None`` at zero temperature, where it is undefined.
    """

    U0: float
    beta_L: float
    beta_C: float
    beta_h: float
    x_phi: float
    lambda_T: float | None
    n_thermal: float

    def to_dict(self) -> dict:
        return asdict(self)


def bose_occupation(hbar_omega: float, kT: float) -> float:
    if kT == 0.0:
        return 0.0
    x = hbar_omega / kT
    # e^{-x} / (1 - e^{-x}) stays finite for large x, unlike 1 / expm1(x)
    return math.exp(-x) / -math.expm1(-x)


def thermal_factor(device: DeviceParams, constants: PhysicalConstants = CODATA) -> float:
    """coth(hbar*omega0 / 2 k_B T) = 2<n> + 1; equals 1 at T = 0."""
    kT = constants.boltzmann * device.temperature
    return 2.0 * bose_occupation(constants.hbar * device.angular_frequency, kT) + 1.0


def thermal_length(device: DeviceParams, constants: PhysicalConstants = CODATA) -> float:
    """hbar / sqrt(2 m k_B T) in metres."""
    if device.temperature == 0.0:
        raise UndefinedQuantityError("thermal length is undefined at T = 0")
    return constants.hbar / math.sqrt(
        2.0 * device.effective_mass * constants.boltzmann * device.temperature
    )


def energy_scale(device: DeviceParams, constants: PhysicalConstants = CODATA) -> float:
    """U0 = Phi0^2 / (8 pi^2 L)."""
    return constants.flux_quantum**2 / (8.0 * math.pi**2 * device.loop_inductance)


def derive(device: DeviceParams, constants: PhysicalConstants = CODATA) -> DerivedParams:
    phi0 = constants.flux_quantum
    U0 = energy_scale(device, constants)
    hw = constants.hbar * device.angular_frequency
    lam = None if device.temperature == 0.0 else thermal_length(device, constants)
    return DerivedParams(
        U0=U0,
        beta_L=2.0 * math.pi * device.loop_inductance * device.critical_current / phi0,
        beta_C=2.0 * constants.electron_charge**2 / (device.junction_capacitance * U0),
        beta_h=hw / U0,
        x_phi=phi0 / device.field_length_product,
        lambda_T=lam,
        n_thermal=bose_occupation(hw, constants.boltzmann * device.temperature),
    )


def zero_point_scale(device: DeviceParams, constants: PhysicalConstants = CODATA) -> float:
    """sqrt(m omega0 / 2 hbar), the inverse coherent-state length, in 1/m."""
    return math.sqrt(device.effective_mass * device.angular_frequency / (2.0 * constants.hbar))
