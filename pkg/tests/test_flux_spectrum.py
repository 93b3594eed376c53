import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squidsim.errors import GridTooSmallError, ParameterDomainError
from squidsim.flux_spectrum import (
    FluxGrid,
    applied_flux,
    bias_sweep,
    eigenstate_report,
    half_splitting,
    potential_surface,
    potential_u,
    solve_eigen,
)
from squidsim.params import CODATA, reference_device

# Independent oracle: sinc-DVR (spectral) discretization on [-2pi, 2pi] with
# 601 points, dense LAPACK eigh; converged to ~1e-12 (401 and 601 agree).
DVR_B0 = [3.2107690389056507, 3.4465660771749156, 4.701485596019765]
DVR_B02079 = [2.688107918034336, 3.8902117821483326, 4.629424695234138]


@pytest.fixture(scope="module")
def spec0():
    return solve_eigen(bias=0.0, beta_L=1.9, beta_C=0.78, k=3)


def test_matches_spectral_oracle(spec0):
    np.testing.assert_allclose(spec0.eigenvalues, DVR_B0, rtol=1e-8)
    s = solve_eigen(bias=0.2079, beta_L=1.9, beta_C=0.78, k=3)
    np.testing.assert_allclose(s.eigenvalues, DVR_B02079, rtol=1e-8)


def test_raw_grid_values_kept(spec0):
    assert spec0.grid_eigenvalues.shape == (3,)
    assert not np.array_equal(spec0.grid_eigenvalues, spec0.eigenvalues)
    np.testing.assert_allclose(spec0.grid_eigenvalues, DVR_B0, rtol=1e-5)


def test_wavefunction_conventions(spec0):
    psi, h = spec0.wavefunctions, spec0.grid.spacing
    assert psi.shape == (3, 2001)
    assert np.all(psi[:, 0] == 0) and np.all(psi[:, -1] == 0)
    np.testing.assert_allclose(psi @ psi.T * h, np.eye(3), atol=1e-8)
    for row in psi:
        assert row[np.argmax(np.abs(row))] > 0


def test_parity_at_zero_bias(spec0):
    psi = spec0.wavefunctions
    np.testing.assert_allclose(psi[0], psi[0][::-1], atol=1e-8)
    np.testing.assert_allclose(psi[1], -psi[1][::-1], atol=1e-8)


def test_refined_convergence_below_1e6():
    grid = FluxGrid()
    a = solve_eigen(grid, 0.0, 1.9, 0.78, k=4).eigenvalues
    b = solve_eigen(grid.refined(), 0.0, 1.9, 0.78, k=4).eigenvalues
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-6


def test_raw_second_order_rate():
    grid = FluxGrid(num_points=501)
    lam = [solve_eigen(g, 0.0, 1.9, 0.78, k=4, refine=False, check=False).grid_eigenvalues
           for g in (grid, grid.refined(), grid.refined().refined())]
    ratio = (lam[0] - lam[1]) / (lam[1] - lam[2])
    np.testing.assert_allclose(ratio, 4.0, rtol=0.01)


def test_harmonic_limit():
    s = solve_eigen(bias=0.0, beta_L=0.0, beta_C=0.78, k=4)
    exact = (2 * np.arange(4) + 1) * math.sqrt(0.78)
    assert np.max(np.abs(s.eigenvalues / exact - 1)) < 1e-4


@settings(max_examples=15, deadline=None)
@given(b=st.floats(-0.5, 0.5), bL=st.floats(0.0, 3.0), bC=st.floats(0.3, 2.0))
def test_variational_lower_bound(b, bL, bC):
    s = solve_eigen(bias=b, beta_L=bL, beta_C=bC, k=2, refine=False, check=False)
    assert s.grid_eigenvalues[0] >= np.min(potential_u(s.phi, b, bL))
    assert s.grid_eigenvalues[1] > s.grid_eigenvalues[0]


def test_minimum_gap_at_zero_bias():
    biases = np.linspace(-0.5, 0.5, 21)
    lam = bias_sweep(biases, 1.9, 0.78)
    gap = lam[:, 1] - lam[:, 0]
    assert biases[np.argmin(gap)] == 0.0
    np.testing.assert_allclose(gap, gap[::-1], rtol=1e-9)


def test_sweep_workers_same_rows():
    biases = [0.3, -0.1, 0.0]
    np.testing.assert_array_equal(bias_sweep(biases, 1.9, 0.78), bias_sweep(biases, 1.9, 0.78, workers=3))


def test_half_splitting(spec0):
    assert half_splitting(spec0) == pytest.approx(0.5 * (DVR_B0[1] - DVR_B0[0]), rel=1e-8)


def test_narrow_grid_rejected():
    with pytest.raises(GridTooSmallError):
        solve_eigen(FluxGrid(-2.5, 2.5, 801), 0.0, 1.9, 0.78)


@pytest.mark.parametrize("kwargs", [{"k": 0}, {"beta_C": 0.0}, {"bias": math.nan}])
def test_bad_arguments(kwargs):
    with pytest.raises(ParameterDomainError):
        solve_eigen(FluxGrid(num_points=101), **kwargs)


def test_grid_validation():
    with pytest.raises(ParameterDomainError):
        FluxGrid(1.0, -1.0)
    with pytest.raises(ParameterDomainError):
        FluxGrid(num_points=2)


def test_report_columns(spec0):
    rep = eigenstate_report(spec0, sweep_biases=[-0.1, 0.0, 0.1])
    assert rep.header == ("phi", "u_over_U0", "psi0", "psi1", "psi2")
    assert rep.sweep_header == ("bias", "lambda0", "lambda1")
    assert rep.states.shape == (2001, 5)
    # plotted wavefunctions sit on their level
    np.testing.assert_allclose(rep.states[[0, -1], 2:], np.tile(spec0.eigenvalues, (2, 1)))


def test_potential_surface_matches_dimensionless_form():
    dev = reference_device()
    phi0 = CODATA.flux_quantum
    Phi = np.linspace(-phi0, 2 * phi0, 7)
    U = potential_surface([0.0], Phi, dev)[0]
    U0 = phi0**2 / (8 * math.pi**2 * dev.loop_inductance)
    beta_L = 2 * math.pi * dev.loop_inductance * dev.critical_current / phi0
    # at x = 0, U / U0 = (phi - pi)^2 + 2 beta_L cos(phi) - ... with phi = 2 pi Phi / Phi0
    phi = 2 * math.pi * Phi / phi0
    shifted = phi - math.pi
    expected = shifted**2 + 2 * beta_L * np.cos(shifted)
    np.testing.assert_allclose(U / U0, expected, rtol=1e-10)
    assert applied_flux(dev) == pytest.approx(phi0 / 2)


def test_potential_surface_shape_and_errors():
    dev = reference_device()
    assert potential_surface(np.zeros(3), np.zeros(5), dev).shape == (3, 5)
    with pytest.raises(ParameterDomainError):
        potential_surface([], [0.0], dev)
    with pytest.raises(ParameterDomainError):
        potential_surface([math.inf], [0.0], dev)
