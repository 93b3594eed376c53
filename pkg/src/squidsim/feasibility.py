"""Feasibility verdict for observing mechanical decoherence and recoherence.

Each check records the number it judged, the threshold and the direction of
the comparison, so a report can be audited without recomputation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoDoubleWellError, TwoLevelInvalidError
from .flux_spectrum import FluxGrid
from .params import CODATA, DerivedParams, DeviceParams, PhysicalConstants, derive, thermal_factor
from .two_level import CouplingParams, TwoLevelModel, derive_coupling, extract_two_level
from .visibility import first_peak_damping_exponent, nu0_thermal

GAP_RATIO_MIN = 2.0
ZENER_PROBABILITY_MAX = 1e-3
ZETA_MAX = 0.05
QUBIT_THERMAL_MAX = 0.1
DECOHERENCE_DEPTH_MIN = 0.5
FIRST_PEAK_MIN = 0.1
DEPTH_SAMPLES = 2001


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    comparison: str  # ">" or "<"
    description: str
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.comparison == ">":
            return self.value > self.threshold
        return self.value < self.threshold

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "comparison": self.comparison,
            "threshold": self.threshold,
            "description": self.description,
        }
        d.update(self.extra)
        return d


@dataclass(frozen=True)
class FeasibilityReport:
    derived: DerivedParams
    beta_L: float
    beta_C: float
    two_level: TwoLevelModel | None
    coupling: CouplingParams | None
    checks: tuple
    failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None and all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failure": self.failure,
            "derived": self.derived.to_dict(),
            "spectrum_betas": {"beta_L": self.beta_L, "beta_C": self.beta_C},
            "two_level": None if self.two_level is None else self.two_level.to_dict(),
            "coupling": None if self.coupling is None else self.coupling.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
        }


def decoherence_depth(zeta, alpha0, n_thermal, samples=DEPTH_SAMPLES) -> float:
    """1 - min |nu0| over one recoherence period."""
    theta = np.linspace(0.0, 2.0 * math.pi, samples)
    return float(1.0 - np.min(np.abs(nu0_thermal(theta, 1.0, 1.0, alpha0, n_thermal))))


def feasibility_report(
    device: DeviceParams,
    constants: PhysicalConstants = CODATA,
    grid: FluxGrid | None = None,
    beta_L: float | None = None,
    beta_C: float | None = None,
) -> FeasibilityReport:
    """Run the full chain and judge observability.

    ``beta_L`` and ``beta_C`` override the device-derived values for the
    flux spectrum only; the energy scale always comes from the device.
    """
    derived = derive(device, constants)
    bL = derived.beta_L if beta_L is None else float(beta_L)
    bC = derived.beta_C if beta_C is None else float(beta_C)
    checks = [Check("double_well", bL, 1.0, ">", "beta_L > 1 gives two flux minima")]
    try:
        model = extract_two_level(bL, bC, derived.U0, grid=grid)
    except NoDoubleWellError as exc:
        return FeasibilityReport(derived, bL, bC, None, None, tuple(checks), str(exc))
    except TwoLevelInvalidError as exc:
        checks.append(
            Check("two_level_validity", exc.gap_ratio, GAP_RATIO_MIN, ">", "(l2 - l1)/(l1 - l0)")
        )
        return FeasibilityReport(derived, bL, bC, None, None, tuple(checks), str(exc))

    coupling = derive_coupling(model, device, derived, constants)
    kT = constants.boltzmann * device.temperature
    coth = thermal_factor(device, constants)
    peak = first_peak_damping_exponent(coupling.zeta, coupling.alpha0, device.quality_factor, coth)
    depth = decoherence_depth(coupling.zeta, coupling.alpha0, derived.n_thermal)
    checks += [
        Check(
            "two_level_validity",
            model.gap_ratio,
            GAP_RATIO_MIN,
            ">",
            "(l2 - l1)/(l1 - l0): third level well separated",
        ),
        Check(
            "adiabaticity",
            coupling.zener_exponent,
            -math.log(ZENER_PROBABILITY_MAX),
            ">",
            "Zener exponent; p_Z = exp(-value) must stay below 1e-3",
            {"p_zener": math.exp(-coupling.zener_exponent)},
        ),
        Check("zeta_small", coupling.zeta, ZETA_MAX, "<", "first-order expansion in zeta"),
        Check(
            "qubit_cold",
            kT / (2.0 * model.delta),
            QUBIT_THERMAL_MAX,
            "<",
            "k_B T / 2 Delta: qubit starts in its ground state",
        ),
        Check(
            "decoherence_depth",
            depth,
            DECOHERENCE_DEPTH_MIN,
            ">",
            "1 - min |nu0| over a recoherence period",
            {"n_thermal": derived.n_thermal},
        ),
        Check(
            "recoherence",
            -peak,
            math.log(FIRST_PEAK_MIN),
            ">",
            "ln nu_d at the first recoherence time; nu_d(t1) must exceed 0.1",
            {"nu_d_t1": math.exp(-peak)},
        ),
    ]
    return FeasibilityReport(derived, bL, bC, model, coupling, tuple(checks))
