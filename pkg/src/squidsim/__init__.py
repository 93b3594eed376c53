"""Flux qubit with a mechanically compliant loop: spectrum, two-level
reduction, and decoherence/recoherence of Rabi visibility.

The tridiagonal eigen-kernels are compiled with Cython when available;
``squidsim.kernels.BACKEND`` says which implementation was loaded.
"""
from .errors import SquidSimError
from .feasibility import FeasibilityReport, feasibility_report
from .flux_spectrum import FluxGrid, Spectrum, solve_eigen
from .kernels import BACKEND
from .params import CODATA, DerivedParams, DeviceParams, PhysicalConstants, derive, reference_device
from .two_level import CouplingParams, TwoLevelModel, derive_coupling, extract_two_level
from .visibility import VisibilitySeries, visibility_series

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CODATA",
    "CouplingParams",
    "DerivedParams",
    "DeviceParams",
    "FeasibilityReport",
    "FluxGrid",
    "PhysicalConstants",
    "Spectrum",
    "SquidSimError",
    "TwoLevelModel",
    "VisibilitySeries",
    "derive",
    "derive_coupling",
    "extract_two_level",
    "feasibility_report",
    "reference_device",
    "solve_eigen",
    "visibility_series",
]
