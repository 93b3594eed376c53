"""Flux-sector potential and the 1D stationary Schroedinger eigenproblem.

In units of U0 the flux Hamiltonian is

    -beta_C d^2/dphi^2 + (phi - bias)^2 + 2 beta_L cos(phi)

with ``bias = phi_e + phi_x``. It is discretized by second-order central
differences with Dirichlet ends and solved with the tridiagonal kernels in
:mod:`squidsim.kernels`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import GridTooSmallError, ParameterDomainError
from .params import CODATA, DeviceParams, PhysicalConstants

DECAY_TOL = 1e-8
NORM_TOL = 1e-10
ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class FluxGrid:
    phi_min: float = -2.0 * math.pi
    phi_max: float = 2.0 * math.pi
    num_points: int = 2001

    def __post_init__(self):
        if not self.phi_min < self.phi_max:
            raise ParameterDomainError("phi_min", self.phi_min, f"< phi_max={self.phi_max}")
        if int(self.num_points) != self.num_points or self.num_points < 3:
            raise ParameterDomainError("num_points", self.num_points, "an integer >= 3")

    @property
    def spacing(self) -> float:
        return (self.phi_max - self.phi_min) / (self.num_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.phi_min, self.phi_max, self.num_points)

    def refined(self) -> "FluxGrid":
        """Same interval with the spacing halved."""
        return FluxGrid(self.phi_min, self.phi_max, 2 * self.num_points - 1)


@dataclass(frozen=True)
class Spectrum:
    bias: float
    eigenvalues: np.ndarray
    wavefunctions: np.ndarray  # shape (k, num_points), zero at both ends
    grid: FluxGrid
    grid_eigenvalues: np.ndarray = field(repr=False)
    beta_L: float = 0.0
    beta_C: float = 0.0

    @property
    def phi(self) -> np.ndarray:
        return self.grid.points


def potential_u(phi, bias, beta_L):
    """u/U0 = (phi - bias)^2 + 2 beta_L cos(phi)."""
    phi = np.asarray(phi, dtype=float)
    return (phi - bias) ** 2 + 2.0 * beta_L * np.cos(phi)


def potential_surface(x, Phi, device: DeviceParams, constants: PhysicalConstants = CODATA):
    """U(x, Phi) in joules on the outer product of ``x`` (m) and ``Phi`` (Wb).

    Returns an array of shape ``(len(x), len(Phi))``. The applied flux is
    ``Phi_e = Phi0 (pi + bias_phase) / 2 pi``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    Phi = np.atleast_1d(np.asarray(Phi, dtype=float))
    if x.size == 0 or Phi.size == 0:
        raise ParameterDomainError("range", (x.size, Phi.size), "non-empty")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(Phi))):
        raise ParameterDomainError("range", "non-finite", "finite")
    phi0 = constants.flux_quantum
    Phi_e = applied_flux(device, constants)
    X, F = np.meshgrid(x, Phi, indexing="ij")
    m, w0, L, Bl = (
        device.effective_mass,
        device.angular_frequency,
        device.loop_inductance,
        device.field_length_product,
    )
    return (
        0.5 * m * w0**2 * X**2
        + (F - Phi_e - Bl * X) ** 2 / (2.0 * L)
        - phi0 * device.critical_current * np.cos(2.0 * math.pi * F / phi0) / (2.0 * math.pi)
    )


def applied_flux(device: DeviceParams, constants: PhysicalConstants = CODATA) -> float:
    return constants.flux_quantum * (math.pi + device.bias_phase) / (2.0 * math.pi)


def _tridiagonal(grid: FluxGrid, bias, beta_L, beta_C):
    phi = grid.points[1:-1]
    h = grid.spacing
    d = potential_u(phi, bias, beta_L) + 2.0 * beta_C / h**2
    e = np.full(phi.size - 1, -beta_C / h**2)
    return d, e


def _grid_solve(grid, bias, beta_L, beta_C, k, vectors=True):
    d, e = _tridiagonal(grid, bias, beta_L, beta_C)
    lam = kernels.bisect_lowest(d, e, k)
    if not vectors:
        return lam, None
    h = grid.spacing
    psi = np.zeros((k, grid.num_points))
    for n in range(k):
        v = kernels.inverse_iteration(d, e, lam[n])
        for m in range(n):
            # guards near-degenerate pairs; a no-op for well separated levels
            v -= np.dot(psi[m, 1:-1], v) * h * psi[m, 1:-1]
        v /= math.sqrt(np.dot(v, v) * h)
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        psi[n, 1:-1] = v
    return lam, psi


def solve_eigen(
    grid: FluxGrid | None = None,
    bias: float = 0.0,
    beta_L: float = 1.9,
    beta_C: float = 0.78,
    k: int = 3,
    refine: bool = True,
    check: bool = True,
) -> Spectrum:
    """Lowest ``k`` eigenpairs of the dimensionless flux Hamiltonian.

    With ``refine`` the eigenvalues are Richardson-extrapolated from the grid
    and its doubled refinement, ``(4 lam(h/2) - lam(h)) / 3``; the raw
    second-order values are kept in ``grid_eigenvalues``. Wavefunctions are
    always those of ``grid``, normalized so that ``sum(psi**2) * h == 1`` and
    signed so the largest-magnitude sample is positive.
    """
    grid = grid or FluxGrid()
    if int(k) != k or k < 1:
        raise ParameterDomainError("k", k, "an integer >= 1")
    if k > grid.num_points - 2:
        raise ParameterDomainError("k", k, f"<= {grid.num_points - 2} interior grid points")
    for name, v in (("bias", bias), ("beta_L", beta_L), ("beta_C", beta_C)):
        if not math.isfinite(v):
            raise ParameterDomainError(name, v, "finite")
    if beta_C <= 0:
        raise ParameterDomainError("beta_C", beta_C, "> 0")

    lam, psi = _grid_solve(grid, bias, beta_L, beta_C, k)
    values = lam
    if refine:
        fine, _ = _grid_solve(grid.refined(), bias, beta_L, beta_C, k, vectors=False)
        values = (4.0 * fine - lam) / 3.0
    spec = Spectrum(
        bias=float(bias),
        eigenvalues=np.asarray(values),
        wavefunctions=psi,
        grid=grid,
        grid_eigenvalues=np.asarray(lam),
        beta_L=float(beta_L),
        beta_C=float(beta_C),
    )
    if check:
        check_spectrum(spec)
    return spec


def check_spectrum(spec: Spectrum) -> None:
    """Assert ordering, orthonormality and endpoint decay of a solved spectrum."""
    h = spec.grid.spacing
    lam = spec.grid_eigenvalues
    if np.any(np.diff(lam) <= 0):
        raise ArithmeticError(f"eigenvalues not strictly ascending: {lam}")
    gram = spec.wavefunctions @ spec.wavefunctions.T * h
    k = lam.size
    if np.max(np.abs(np.diag(gram) - 1.0)) > NORM_TOL:
        raise ArithmeticError("eigenvectors not normalized")
    if k > 1 and np.max(np.abs(gram - np.diag(np.diag(gram)))) > ORTHO_TOL:
        raise ArithmeticError("eigenvectors not orthogonal")
    # probability density next to the Dirichlet ends
    edge = np.max(spec.wavefunctions[:, [1, -2]] ** 2, axis=1)
    bad = np.nonzero(edge > DECAY_TOL)[0]
    if bad.size:
        raise GridTooSmallError(
            f"level {int(bad[0])} has |psi|^2={edge[bad[0]]:.3g} at the grid edge "
            f"(limit {DECAY_TOL:g}); widen [{spec.grid.phi_min}, {spec.grid.phi_max}]"
        )


def half_splitting(spec: Spectrum) -> float:
    """(lambda_1 - lambda_0) / 2 in units of U0."""
    return 0.5 * float(spec.eigenvalues[1] - spec.eigenvalues[0])


def bias_sweep(biases, beta_L, beta_C, grid: FluxGrid | None = None, k: int = 2, workers=None):
    """Eigenvalues versus bias; returns an array of shape ``(len(biases), k)``.

    ``workers`` > 1 solves the bias points in a thread pool (the compiled
    kernels release the GIL); rows stay in input order.
    """
    biases = [float(b) for b in biases]

    def one(b):
        return solve_eigen(grid, b, beta_L, beta_C, k, check=False).eigenvalues

    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, biases))
    else:
        rows = [one(b) for b in biases]
    return np.array(rows).reshape(len(biases), k)


@dataclass(frozen=True)
class EigenstateReport:
    """Plot data for the eigenstate figure.

    ``states`` rows are ``phi, u/U0, psi_0 + lambda_0, ..., psi_{k-1} + lambda_{k-1}``;
    ``sweep`` rows are ``bias, lambda_0, lambda_1``.
    """

    header: tuple
    states: np.ndarray
    sweep_header: tuple
    sweep: np.ndarray


def eigenstate_report(spec: Spectrum, k: int = 3, sweep_biases=None, grid=None, workers=None):
    if spec.eigenvalues.size < k:
        raise ParameterDomainError("k", k, f"<= {spec.eigenvalues.size} solved levels")
    phi = spec.phi
    cols = [phi, potential_u(phi, spec.bias, spec.beta_L)]
    cols += [spec.wavefunctions[n] + spec.eigenvalues[n] for n in range(k)]
    header = ("phi", "u_over_U0") + tuple(f"psi{n}" for n in range(k))
    if sweep_biases is None:
        sweep_biases = np.linspace(-0.5, 0.5, 41)
    sweep_biases = np.asarray(sweep_biases, dtype=float)
    lam = bias_sweep(sweep_biases, spec.beta_L, spec.beta_C, grid or spec.grid, 2, workers)
    return EigenstateReport(
        header=header,
        states=np.column_stack(cols),
        sweep_header=("bias", "lambda0", "lambda1"),
        sweep=np.column_stack([sweep_biases, lam]),
    )
