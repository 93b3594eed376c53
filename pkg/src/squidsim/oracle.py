"""Exact number-basis propagation of the conditioned mechanical evolutions.

Works in units hbar = omega0 = 1, where

    H(zeta) = (a^dag a + 1/2) + (zeta/4) (a + a^dag)^2

is the oscillator with stiffness scaled by ``1 + zeta``. The overlap

    nu0(t) = < exp(i H(-zeta) t) exp(-i H(zeta) t) >

is evaluated without the ``H(zeta) ~ sqrt(1+zeta) H(0)`` replacement, by
exact diagonalization of the truncated matrices. Thermal states are averaged
over coherent states drawn from the Glauber P distribution: Gauss-Laguerre in
``|alpha|^2 / <n>`` times a trapezoid rule in the phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_laguerre

from .errors import TruncationError
from .visibility import nu0_thermal

DEFAULT_TRUNCATION = 64
MAX_TRUNCATION = 1024
TOP_POPULATION_TOL = 1e-10
HERMITIAN_TOL = 1e-12
RADIAL_NODES = 31
ANGULAR_NODES = 32
TIME_CHUNK = 4096


@dataclass(frozen=True)
class NumberBasisOperator:
    dimension: int
    matrix: np.ndarray

    def is_hermitian(self, tol=HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)


def hamiltonian(zeta: float, dimension: int) -> NumberBasisOperator:
    """H(zeta)/(hbar omega0) in the omega0 Fock basis, truncated to ``dimension``."""
    n = np.arange(dimension)
    root = np.sqrt(np.arange(1, dimension))
    x = np.diag(root, 1) + np.diag(root, -1)
    h = np.diag(n + 0.5) + 0.25 * zeta * (x @ x)
    return NumberBasisOperator(dimension, h.astype(complex))


def coherent_states(betas, dimension: int) -> np.ndarray:
    """Columns are Fock amplitudes of |beta> (truncated, not renormalized)."""
    betas = np.atleast_1d(np.asarray(betas, dtype=complex))
    c = np.empty((dimension, betas.size), dtype=complex)
    c[0] = np.exp(-0.5 * np.abs(betas) ** 2)
    for k in range(1, dimension):
        c[k] = c[k - 1] * betas / math.sqrt(k)
    return c


def thermal_nodes(alpha0: float, n_thermal: float, radial=RADIAL_NODES, angular=ANGULAR_NODES):
    """Coherent amplitudes ``alpha0 + alpha`` and weights for the P-distribution average."""
    if n_thermal == 0.0:
        return np.array([complex(alpha0)]), np.array([1.0])
    u, w = roots_laguerre(radial)
    r = np.sqrt(n_thermal * u)
    phase = np.exp(2j * math.pi * np.arange(angular) / angular)
    betas = (alpha0 + r[:, None] * phase[None, :]).ravel()
    weights = np.repeat(w / angular, angular)
    return betas, weights


@dataclass
class _Propagators:
    energies_plus: np.ndarray
    energies_minus: np.ndarray
    kernel: np.ndarray  # K_jk = sum_w w conj(c-_jw) <j-|k+> c+_kw
    dimension: int
    top_population: float


def _prepare(zeta, betas, weights, dimension):
    hp = hamiltonian(zeta, dimension)
    hm = hamiltonian(-zeta, dimension)
    assert hp.is_hermitian() and hm.is_hermitian()
    ep, vp = np.linalg.eigh(hp.matrix.real)
    em, vm = np.linalg.eigh(hm.matrix.real)
    states = coherent_states(betas, dimension)
    cp = vp.T @ states
    cm = vm.T @ states
    # time-independent bound on the top-two Fock populations of every propagated state
    bound = 0.0
    for v, c in ((vp, cp), (vm, cm)):
        amp = np.abs(v[-2:, :]) @ np.abs(c)
        bound = max(bound, float(np.sum(weights * np.sum(amp**2, axis=0))))
    kernel = (np.conj(cm) * weights) @ cp.T * (vm.T @ vp)
    return _Propagators(ep, em, kernel, dimension, bound)


def _propagators(zeta, alpha0, n_thermal, truncation):
    betas, weights = thermal_nodes(alpha0, n_thermal)
    dim = int(truncation)
    while True:
        prop = _prepare(zeta, betas, weights, dim)
        if prop.top_population < TOP_POPULATION_TOL:
            return prop
        if dim >= MAX_TRUNCATION:
            raise TruncationError(
                f"top Fock population {prop.top_population:.3g} at dimension {dim} "
                f"(cap {MAX_TRUNCATION})"
            )
        dim = min(2 * dim, MAX_TRUNCATION)


def exact_overlap(zeta, alpha0, n_thermal, t, omega0=1.0, truncation=DEFAULT_TRUNCATION):
    """Exact nu0 at times ``t`` (seconds if ``omega0`` is in rad/s).

    Returns ``(values, dimension)`` where ``dimension`` is the truncation
    actually used after automatic growth.
    """
    tau = omega0 * np.atleast_1d(np.asarray(t, dtype=float))
    if zeta == 0.0:
        # identical propagators cancel exactly
        return np.ones(tau.shape, dtype=complex), int(truncation)
    prop = _propagators(zeta, alpha0, n_thermal, truncation)
    out = np.empty(tau.shape, dtype=complex)
    for s in range(0, tau.size, TIME_CHUNK):
        chunk = tau[s : s + TIME_CHUNK]
        left = np.exp(1j * np.outer(chunk, prop.energies_minus))
        right = np.exp(-1j * np.outer(prop.energies_plus, chunk))
        out[s : s + TIME_CHUNK] = np.einsum("tj,jt->t", left, prop.kernel @ right)
    return out, prop.dimension


def exact_overlap_montecarlo(
    zeta, alpha0, n_thermal, t, omega0=1.0, samples=4000, seed=0, truncation=DEFAULT_TRUNCATION
):
    """Monte Carlo version of the thermal average; returns ``(mean, standard_error)``."""
    rng = np.random.default_rng(seed)
    alpha = math.sqrt(n_thermal / 2.0) * (rng.standard_normal(samples) + 1j * rng.standard_normal(samples))
    betas = alpha0 + alpha
    weights = np.full(samples, 1.0 / samples)
    tau = omega0 * np.atleast_1d(np.asarray(t, dtype=float))
    dim = int(truncation)
    while True:
        hp = np.linalg.eigh(hamiltonian(zeta, dim).matrix.real)
        hm = np.linalg.eigh(hamiltonian(-zeta, dim).matrix.real)
        states = coherent_states(betas, dim)
        cp, cm = hp[1].T @ states, hm[1].T @ states
        amp = np.abs(hp[1][-2:, :]) @ np.abs(cp)
        if float(np.sum(weights * np.sum(amp**2, axis=0))) < TOP_POPULATION_TOL or dim >= MAX_TRUNCATION:
            break
        dim *= 2
    overlap = hm[1] @ (cm[:, None, :] * np.exp(-1j * np.outer(hm[0], tau))[:, :, None]).reshape(dim, -1)
    forward = hp[1] @ (cp[:, None, :] * np.exp(-1j * np.outer(hp[0], tau))[:, :, None]).reshape(dim, -1)
    per_sample = np.sum(overlap.conj() * forward, axis=0).reshape(tau.size, samples)
    mean = per_sample.mean(axis=1)
    err = per_sample.std(axis=1, ddof=1) / math.sqrt(samples)
    return mean, err


def propagated_norms(zeta, beta, t, omega0=1.0, truncation=DEFAULT_TRUNCATION):
    """Norms of exp(-i H(zeta) t)|beta> in the truncated basis (unitarity check)."""
    e, v = np.linalg.eigh(hamiltonian(zeta, truncation).matrix.real)
    c = v.T @ coherent_states(beta, truncation)[:, 0]
    tau = omega0 * np.atleast_1d(np.asarray(t, dtype=float))
    states = v @ (c[:, None] * np.exp(-1j * np.outer(e, tau)))
    return np.linalg.norm(states, axis=0) / np.linalg.norm(c)


def return_fidelity(generator: str, zeta, beta, truncation=DEFAULT_TRUNCATION):
    """|<beta| U(T) |beta>| after one period T = 2 pi / sqrt(1 + zeta).

    ``generator`` is ``"exact"`` for H(zeta) or ``"scaled"`` for sqrt(1+zeta) H(0).
    """
    period = 2.0 * math.pi / math.sqrt(1.0 + zeta)
    state = coherent_states(beta, truncation)[:, 0]
    state = state / np.linalg.norm(state)
    if generator == "scaled":
        e = math.sqrt(1.0 + zeta) * (np.arange(truncation) + 0.5)
        evolved = np.exp(-1j * e * period) * state
    elif generator == "exact":
        e, v = np.linalg.eigh(hamiltonian(zeta, truncation).matrix.real)
        evolved = v @ (np.exp(-1j * e * period) * (v.T @ state))
    else:
        raise ValueError(f"generator must be 'exact' or 'scaled', got {generator!r}")
    return float(abs(np.vdot(state, evolved)))


@dataclass(frozen=True)
class ScanRow:
    zeta: float
    max_error: float
    truncation: int
    num_times: int


@dataclass(frozen=True)
class ErrorScanReport:
    alpha0: float
    n_thermal: float
    rows: tuple
    ratios: tuple  # error(zeta_i) / error(zeta_{i+1}) for consecutive rows
    exponents: tuple  # log(ratio) / log(zeta_i / zeta_{i+1})

    def to_dict(self) -> dict:
        return {
            "alpha0": self.alpha0,
            "n_thermal": self.n_thermal,
            "rows": [
                {
                    "zeta": r.zeta,
                    "max_error": r.max_error,
                    "truncation": r.truncation,
                    "num_times": r.num_times,
                }
                for r in self.rows
            ],
            "ratios": list(self.ratios),
            "scaling_exponents": list(self.exponents),
        }


def approximation_error_scan(
    zeta_list,
    alpha0: float,
    n_thermal: float = 0.0,
    t_max=None,
    samples_per_period: int = 48,
    truncation: int = DEFAULT_TRUNCATION,
    zero_zeta_periods: int = 100,
) -> ErrorScanReport:
    """Max over one recoherence period of |nu0_exact - nu0_closed_form| per zeta.

    Times are dimensionless (``omega0 t``); ``t_max`` defaults to ``2 pi / zeta``
    and to ``zero_zeta_periods`` mechanical periods for ``zeta = 0``. The grid
    has ``samples_per_period`` points per mechanical period.
    """
    rows = []
    for zeta in zeta_list:
        zeta = float(zeta)
        if not 0.0 <= zeta < 0.5:
            raise ValueError(f"zeta must lie in [0, 0.5), got {zeta}")
        if t_max is not None:
            span = float(t_max)
        elif zeta == 0.0:
            span = 2.0 * math.pi * zero_zeta_periods
        else:
            span = 2.0 * math.pi / zeta
        num = int(math.ceil(span / (2.0 * math.pi) * samples_per_period)) + 1
        tau = np.linspace(0.0, span, num)
        exact, dim = exact_overlap(zeta, alpha0, n_thermal, tau, 1.0, truncation)
        closed = nu0_thermal(tau, zeta, 1.0, alpha0, n_thermal)
        rows.append(ScanRow(zeta, float(np.max(np.abs(exact - closed))), dim, num))
    ratios, exps = [], []
    for a, b in zip(rows, rows[1:]):
        if a.max_error > 0 and b.max_error > 0 and a.zeta > 0 and b.zeta > 0:
            r = a.max_error / b.max_error
            ratios.append(r)
            exps.append(math.log(r) / math.log(a.zeta / b.zeta))
        else:
            ratios.append(None)
            exps.append(None)
    return ErrorScanReport(float(alpha0), float(n_thermal), tuple(rows), tuple(ratios), tuple(exps))
