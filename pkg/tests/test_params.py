import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squidsim.errors import ParameterDomainError, UndefinedQuantityError
from squidsim.params import (
    CODATA,
    DeviceParams,
    PhysicalConstants,
    bose_occupation,
    derive,
    reference_device,
    thermal_factor,
    thermal_length,
    zero_point_scale,
)

# Frozen from an independent evaluation with literal SI constants
# (h = 6.62607015e-34, e = 1.602176634e-19, k_B = 1.380649e-23).
H = 6.62607015e-34
E = 1.602176634e-19
KB = 1.380649e-23


def _independent(dev):
    phi0 = H / (2 * E)
    U0 = phi0**2 / (8 * math.pi**2 * dev.loop_inductance)
    hw = H / (2 * math.pi) * dev.angular_frequency
    return {
        "U0": U0,
        "beta_L": 2 * math.pi * dev.loop_inductance * dev.critical_current / phi0,
        "beta_C": 2 * E**2 / (dev.junction_capacitance * U0),
        "beta_h": hw / U0,
        "x_phi": phi0 / dev.field_length_product,
        "lambda_T": (H / (2 * math.pi)) / math.sqrt(2 * dev.effective_mass * KB * dev.temperature),
        "n_thermal": 1 / (math.exp(hw / (KB * dev.temperature)) - 1),
    }


def test_reference_matches_independent_formulas():
    dev = reference_device()
    got = derive(dev).to_dict()
    for name, value in _independent(dev).items():
        assert got[name] == pytest.approx(value, rel=1e-12), name


def test_reference_values_frozen():
    d = derive(reference_device())
    assert d.U0 == pytest.approx(8.33159577448e-22, rel=1e-10)
    assert d.U0 / CODATA.boltzmann == pytest.approx(60.345, rel=1e-4)
    assert d.beta_L == pytest.approx(1.97504768224, rel=1e-10)
    assert d.n_thermal == pytest.approx(1.17873369080, rel=1e-10)


def test_energy_scale_in_kelvin_window():
    d = derive(reference_device())
    assert 58.0 <= d.U0 / CODATA.boltzmann <= 66.0


def test_flux_quantum():
    assert CODATA.flux_quantum == pytest.approx(2.067833848e-15, rel=1e-9)


def test_zero_temperature_marks_lambda_undefined():
    dev = reference_device().with_(temperature=0.0)
    d = derive(dev)
    assert d.lambda_T is None
    assert d.n_thermal == 0.0
    assert thermal_factor(dev) == 1.0
    with pytest.raises(UndefinedQuantityError):
        thermal_length(dev)


@pytest.mark.parametrize(
    "field,value",
    [
        ("loop_inductance", 0.0),
        ("junction_capacitance", -1e-15),
        ("critical_current", math.nan),
        ("effective_mass", math.inf),
        ("quality_factor", 0.0),
        ("temperature", -0.01),
    ],
)
def test_domain_errors_name_the_field(field, value):
    with pytest.raises(ParameterDomainError) as info:
        reference_device().with_(**{field: value})
    assert info.value.field == field
    assert field in str(info.value)


def test_constants_validated():
    with pytest.raises(ParameterDomainError):
        PhysicalConstants(hbar=-1.0)


def test_round_trip_dict():
    dev = reference_device()
    assert DeviceParams.from_dict(dev.to_dict()) == dev


def test_derive_is_pure():
    dev = reference_device()
    assert derive(dev) == derive(dev)


def test_zero_point_scale():
    dev = reference_device()
    x_zp = 1.0 / zero_point_scale(dev)
    assert x_zp == pytest.approx(math.sqrt(2 * CODATA.hbar / (dev.effective_mass * dev.angular_frequency)))


@settings(max_examples=60, deadline=None)
@given(
    t1=st.floats(1e-4, 10.0),
    t2=st.floats(1e-4, 10.0),
    f=st.floats(1e6, 1e11),
)
def test_occupation_monotone_in_temperature(t1, t2, f):
    lo, hi = sorted((t1, t2))
    if hi / lo < 1 + 1e-9:
        return
    dev = reference_device().with_(angular_frequency=2 * math.pi * f)
    n_lo = derive(dev.with_(temperature=lo)).n_thermal
    n_hi = derive(dev.with_(temperature=hi)).n_thermal
    # both may underflow to zero deep in the quantum regime
    assert n_hi > n_lo or n_hi == n_lo == 0.0


@settings(max_examples=60, deadline=None)
@given(x=st.floats(1e-6, 50.0))
def test_thermal_factor_is_coth(x):
    n = bose_occupation(x, 1.0)
    assert 2 * n + 1 == pytest.approx(1 / math.tanh(x / 2), rel=1e-12)
