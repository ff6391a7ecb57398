"""Physical parameter records, validation, and display-unit conversions.

Internal units are atomic-style (Hartree-equivalent energies,
bohr-equivalent lengths) under the dispersion convention k1 = sqrt(m E).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

#: 1 internal energy unit in electron-volts.
EV_PER_ENERGY_UNIT = 27.2114
#: 1 internal length unit in nanometers.
NM_PER_LENGTH_UNIT = 0.0529177


class Variant(Enum):
    """Which of the pair of mutually time-reversed potentials is meant."""

    FORWARD = "forward"
    TIME_REVERSED = "time_reversed"


class EnergyUnit(Enum):
    INTERNAL = "internal"
    ELECTRON_VOLT = "ev"
    MEGA_ELECTRON_VOLT = "mev"


class LengthUnit(Enum):
    INTERNAL = "internal"
    NANOMETER = "nm"


@dataclass(frozen=True)
class UnitSystem:
    energy_scale: EnergyUnit = EnergyUnit.INTERNAL
    length_scale: LengthUnit = LengthUnit.INTERNAL


INTERNAL_UNITS = UnitSystem()

_EV_FACTOR = {
    EnergyUnit.INTERNAL: 1.0,
    EnergyUnit.ELECTRON_VOLT: EV_PER_ENERGY_UNIT,
    EnergyUnit.MEGA_ELECTRON_VOLT: EV_PER_ENERGY_UNIT * 1e-6,
}

_NM_FACTOR = {
    LengthUnit.INTERNAL: 1.0,
    LengthUnit.NANOMETER: NM_PER_LENGTH_UNIT,
}


def convert_energy(
    value: float,
    from_units: UnitSystem | EnergyUnit = EnergyUnit.INTERNAL,
    to_units: UnitSystem | EnergyUnit = EnergyUnit.INTERNAL,
) -> float:
    """Convert an energy between unit systems (pure arithmetic)."""
    if not math.isfinite(value):
        raise ValueError(f"energy must be finite, got {value!r}")
    src = from_units.energy_scale if isinstance(from_units, UnitSystem) else from_units
    dst = to_units.energy_scale if isinstance(to_units, UnitSystem) else to_units
    return value / _EV_FACTOR[src] * _EV_FACTOR[dst]


def convert_length(
    value: float,
    from_units: UnitSystem | LengthUnit = LengthUnit.INTERNAL,
    to_units: UnitSystem | LengthUnit = LengthUnit.INTERNAL,
) -> float:
    """Convert a length between unit systems."""
    if not math.isfinite(value):
        raise ValueError(f"length must be finite, got {value!r}")
    src = from_units.length_scale if isinstance(from_units, UnitSystem) else from_units
    dst = to_units.length_scale if isinstance(to_units, UnitSystem) else to_units
    return value / _NM_FACTOR[src] * _NM_FACTOR[dst]


@dataclass(frozen=True)
class PotentialSpec:
    """Physical parameters of the complexified smoothed-step potential.

    v0, rho and mass are in internal units; zeta is the imaginary shift of
    the sampling coordinate and never enters any amplitude (asserted by
    tests).  The shape-phase constant is fixed to one, so the nominal width
    r0 = pi / rho is display metadata only.
    """

    v0: float
    rho: float
    mass: float = 1.0
    zeta: float = 0.0
    variant: Variant = Variant.FORWARD

    @property
    def diffuseness(self) -> float:
        """a = 1 / rho, internal length units."""
        return 1.0 / self.rho

    @property
    def width(self) -> float:
        """Nominal width r0 = pi * a (display only)."""
        return math.pi / self.rho

    def time_reversed(self) -> "PotentialSpec":
        other = {
            Variant.FORWARD: Variant.TIME_REVERSED,
            Variant.TIME_REVERSED: Variant.FORWARD,
        }[self.variant]
        return replace(self, variant=other)


def validate(spec: PotentialSpec) -> PotentialSpec:
    """Return spec unchanged if its invariants hold, else raise ValueError."""
    for name in ("v0", "rho", "mass", "zeta"):
        value = getattr(spec, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")
    if spec.v0 <= 0:
        raise ValueError(f"v0 must be positive, got {spec.v0}")
    if spec.rho <= 0:
        raise ValueError(f"rho must be positive, got {spec.rho}")
    if spec.mass <= 0:
        raise ValueError(f"mass must be positive, got {spec.mass}")
    if not isinstance(spec.variant, Variant):
        raise ValueError(f"variant must be a Variant, got {spec.variant!r}")
    return spec
