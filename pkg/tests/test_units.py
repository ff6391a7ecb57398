"""Unit conversions, parameter validation, and the published parameter
columns."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from wsabsorb.units import (
    EnergyUnit,
    LengthUnit,
    PotentialSpec,
    UnitSystem,
    Variant,
    convert_energy,
    convert_length,
    validate,
)

EV = EnergyUnit.ELECTRON_VOLT
MEV = EnergyUnit.MEGA_ELECTRON_VOLT
NM = LengthUnit.NANOMETER


class TestConversions:
    def test_energy_examples(self):
        assert convert_energy(1.2, to_units=EV) == pytest.approx(32.65368, abs=1e-5)
        assert convert_energy(0.0, to_units=EV) == 0.0
        assert convert_energy(5.5e6, to_units=MEV) == pytest.approx(149.6627, abs=1e-3)

    def test_length_examples(self):
        assert convert_length(1 / 1.8, to_units=NM) == pytest.approx(0.0294, abs=5e-5)
        assert convert_length(1 / 60, to_units=NM) == pytest.approx(0.00088, abs=1e-5)
        assert convert_length(1.0, to_units=NM) == pytest.approx(0.0529177, abs=1e-12)

    def test_unit_system_objects(self):
        display = UnitSystem(energy_scale=EV, length_scale=NM)
        assert convert_energy(1.0, UnitSystem(), display) == pytest.approx(27.2114)
        assert convert_energy(27.2114, display, UnitSystem()) == pytest.approx(1.0)

    @given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_energy_round_trip(self, value):
        for unit in (EV, MEV):
            back = convert_energy(convert_energy(value, EnergyUnit.INTERNAL, unit),
                                  unit, EnergyUnit.INTERNAL)
            assert back == pytest.approx(value, rel=1e-12, abs=1e-280)

    @given(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_length_round_trip(self, value):
        back = convert_length(convert_length(value, LengthUnit.INTERNAL, NM),
                              NM, LengthUnit.INTERNAL)
        assert back == pytest.approx(value, rel=1e-12, abs=1e-280)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            convert_energy(math.inf)
        with pytest.raises(ValueError):
            convert_length(math.nan)


class TestValidate:
    def test_good_spec(self):
        spec = PotentialSpec(v0=1.2, rho=1.8, mass=1.0, zeta=0.0)
        assert validate(spec) is spec

    def test_sign_errors(self):
        with pytest.raises(ValueError, match="v0 must be positive"):
            validate(PotentialSpec(v0=-1.0, rho=1.0, mass=1.0))
        with pytest.raises(ValueError, match="rho must be positive"):
            validate(PotentialSpec(v0=1.0, rho=0.0, mass=1.0))
        with pytest.raises(ValueError, match="mass must be positive"):
            validate(PotentialSpec(v0=1.0, rho=1.0, mass=-2.0))

    def test_nonfinite_fields(self):
        with pytest.raises(ValueError, match="zeta must be finite"):
            validate(PotentialSpec(v0=1.0, rho=1.0, mass=1.0, zeta=math.inf))

    def test_variant_flip(self):
        spec = PotentialSpec(v0=1.0, rho=1.0)
        assert spec.variant is Variant.FORWARD
        assert spec.time_reversed().variant is Variant.TIME_REVERSED
        assert spec.time_reversed().time_reversed() == spec


# Published parameter columns (depth in eV/MeV, diffuseness and width in nm)
# against the figure-caption internal parameters.  Tolerance is the larger
# of 0.5% and half a unit in the table's last printed digit: the published
# columns are rounded to one or two significant figures.
_PARAM_ROWS = [
    # (v0, rho, published v0, unit, published a_nm, a_tol, published r0_nm, r0_tol)
    (1.2, 1.8, 32.65, EV, 0.029, 0.0005, 0.093, 0.0008),
    (1.0, 0.0006, 27.2, EV, 88.3, 0.45, 277.5, 1.4),
    (5.5e6, 60.0, 150.0, MEV, 0.0009, 5e-5, 0.003, 5e-4),
    (2.0, 2.0, 54.41, EV, 0.02, 0.007, 0.08, 0.004),
    (15.0, 0.001, 408.01, EV, 53.0, 0.5, 166.5, 0.9),
]


@pytest.mark.parametrize("v0,rho,pub_v0,unit,pub_a,a_tol,pub_r0,r0_tol", _PARAM_ROWS)
def test_published_parameter_columns(v0, rho, pub_v0, unit, pub_a, a_tol, pub_r0, r0_tol):
    spec = validate(PotentialSpec(v0=v0, rho=rho, mass=1.0))
    v0_display = convert_energy(spec.v0, to_units=unit)
    assert abs(v0_display - pub_v0) <= max(0.005 * pub_v0, 0.005 * v0_display)
    a_display = convert_length(spec.diffuseness, to_units=NM)
    assert abs(a_display - pub_a) <= max(0.005 * pub_a, a_tol)
    r0_display = convert_length(spec.width, to_units=NM)
    assert abs(r0_display - pub_r0) <= max(0.005 * pub_r0, r0_tol)
