"""Complex log-gamma with pole bookkeeping and a series-only 2F1 evaluator.

Everything downstream (connection coefficients, scattering amplitudes,
critical-energy classification) reduces to products and ratios of Gamma
functions whose arguments sweep through poles.  Values are therefore kept
in log-magnitude + phase form, and exact poles/zeros are represented
explicitly by :class:`SingularValue` instead of overflowing floats.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

#: Snap tolerance deciding "is this argument an integer".  The critical-point
#: conditions are exact integer conditions; floating input needs an explicit
#: snap rule.  Absolute, on the argument itself.
TAU_INT = 1e-9

_LOG_PI = math.log(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k-1)) for the Stirling series, k = 1..11
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    854513.0 / 63756.0,
)
_STIRLING_CUTOFF = 9.0


class PoleProximityError(ValueError):
    """Gamma argument within the integer-snap tolerance of a pole."""


class SeriesError(RuntimeError):
    """Hypergeometric series failed to converge within the term cap."""


def _nearest_pole_index(z: complex, tau: float) -> int | None:
    """Index k >= 0 if z is within tau of the Gamma pole at -k, else None."""
    k = round(z.real)
    if k <= 0 and abs(z - k) <= tau:
        return -k
    return None


def _log_sin_pi(z: complex) -> complex:
    # sin(pi z) overflows for large |Im z|; switch to the dominant exponential.
    if abs(z.imag) > 20.0:
        if z.imag > 0.0:
            return -1j * math.pi * z + complex(-math.log(2.0), 0.5 * math.pi)
        return 1j * math.pi * z + complex(-math.log(2.0), -0.5 * math.pi)
    # shift the real part into [-1/2, 1/2] before multiplying by pi, so the
    # angle carries no large-argument rounding (the shift is exact in floats)
    n = round(z.real)
    w = complex(z.real - n, z.imag)
    out = cmath.log(cmath.sin(math.pi * w))
    if n % 2:
        out += complex(0.0, math.pi)
    return out


def _stirling(z: complex) -> complex:
    rz = 1.0 / z
    rz2 = rz * rz
    s = 0.0 + 0.0j
    term = rz
    for c in _STIRLING_COEFFS:
        s += c * term
        term *= rz2
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + s


def log_gamma(z: complex, tau: float = TAU_INT) -> complex:
    """Principal log of Gamma(z).

    Stirling asymptotics with argument shift for small ``|z|`` and the
    reflection formula for ``Re z < 0.5``.  ``exp(log_gamma(z))``
    reproduces Gamma(z); the imaginary part is folded into (-pi, pi].

    Raises :class:`PoleProximityError` within ``tau`` of a non-positive
    integer; those cases must go through :func:`gamma_info`.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    if _nearest_pole_index(z, tau) is not None:
        raise PoleProximityError(f"Gamma argument {z} within {tau} of a pole")
    out = _log_gamma_raw(z)
    return complex(out.real, math.remainder(out.imag, 2.0 * math.pi))


def _log_gamma_raw(z: complex) -> complex:
    if z.real < 0.5:
        return _LOG_PI - _log_sin_pi(z) - _log_gamma_raw(1.0 - z)
    shift = 0.0 + 0.0j
    while abs(z) < _STIRLING_CUTOFF:
        shift += cmath.log(z)
        z += 1.0
    return _stirling(z) - shift


@dataclass(frozen=True)
class GammaPoleInfo:
    """Residue data of Gamma at z = -pole_index."""

    pole_index: int
    leading_coefficient: complex

    @classmethod
    def at(cls, k: int) -> "GammaPoleInfo":
        if k < 0:
            raise ValueError("pole index must be a non-negative integer")
        # residue of Gamma at -k is (-1)^k / k!
        coeff = (-1.0) ** k / math.exp(_log_gamma_raw(complex(k + 1)).real)
        return cls(pole_index=k, leading_coefficient=complex(coeff))


@dataclass(frozen=True)
class SingularValue:
    """A complex value with explicit zero/pole order in a limit variable.

    ``order`` is the leading power: 0 for a finite value, +k for a zero of
    order k, -k for a pole of order k.  ``log_magnitude`` and ``phase``
    describe the leading coefficient, so a finite value reconstructs as
    ``exp(log_magnitude) * exp(i*phase)``.  Products and ratios add and
    subtract orders; equal and opposite orders cancel to finite limits with
    the coefficients carried along, which is how amplitude limits at
    critical energies are taken.
    """

    order: int
    log_magnitude: float
    phase: float

    def __post_init__(self):
        object.__setattr__(self, "phase", math.remainder(self.phase, 2.0 * math.pi))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_complex(cls, w: complex) -> "SingularValue":
        w = complex(w)
        if w == 0:
            raise ValueError("exact zero has no log representation; use zero()")
        return cls(0, math.log(abs(w)), cmath.phase(w))

    @classmethod
    def finite(cls, log_magnitude: float, phase: float) -> "SingularValue":
        return cls(0, log_magnitude, phase)

    @classmethod
    def zero(cls, order: int, log_magnitude: float, phase: float) -> "SingularValue":
        if order <= 0:
            raise ValueError("zero order must be positive")
        return cls(order, log_magnitude, phase)

    @classmethod
    def pole(cls, order: int, log_magnitude: float, phase: float) -> "SingularValue":
        if order <= 0:
            raise ValueError("pole order must be positive")
        return cls(-order, log_magnitude, phase)

    # -- classification ----------------------------------------------------

    @property
    def kind(self) -> str:
        if self.order > 0:
            return "zero"
        if self.order < 0:
            return "pole"
        return "finite"

    @property
    def is_finite(self) -> bool:
        return self.order == 0

    @property
    def is_zero(self) -> bool:
        return self.order > 0

    @property
    def is_pole(self) -> bool:
        return self.order < 0

    # -- arithmetic ---------------------------------------------------------

    def __mul__(self, other: "SingularValue") -> "SingularValue":
        return SingularValue(
            self.order + other.order,
            self.log_magnitude + other.log_magnitude,
            self.phase + other.phase,
        )

    def __truediv__(self, other: "SingularValue") -> "SingularValue":
        return SingularValue(
            self.order - other.order,
            self.log_magnitude - other.log_magnitude,
            self.phase - other.phase,
        )

    def __neg__(self) -> "SingularValue":
        return SingularValue(self.order, self.log_magnitude, self.phase + math.pi)

    def __add__(self, other: "SingularValue") -> "SingularValue":
        # Asymptotically in the limit variable the lower order dominates.
        if self.order < other.order:
            return self
        if other.order < self.order:
            return other
        r = other.log_magnitude - self.log_magnitude
        if r > 0.0:
            return other + self
        w = cmath.exp(1j * self.phase) + math.exp(r) * cmath.exp(1j * other.phase)
        if abs(w) < 4e-16 * (1.0 + math.exp(r)):
            raise ArithmeticError("leading coefficients cancel; next order unknown")
        return SingularValue(
            self.order,
            self.log_magnitude + math.log(abs(w)),
            cmath.phase(w),
        )

    def __sub__(self, other: "SingularValue") -> "SingularValue":
        return self + (-other)

    def conjugate(self) -> "SingularValue":
        return SingularValue(self.order, self.log_magnitude, -self.phase)

    def abs_squared(self) -> "SingularValue":
        return SingularValue(2 * self.order, 2.0 * self.log_magnitude, 0.0)

    def sqrt_magnitude(self) -> "SingularValue":
        if self.order % 2:
            raise ValueError("odd order has no single-valued square root")
        return SingularValue(self.order // 2, 0.5 * self.log_magnitude, 0.0)

    # -- extraction ----------------------------------------------------------

    def to_complex(self) -> complex:
        if self.order != 0:
            raise ValueError(f"{self.kind} of order {abs(self.order)} is not finite")
        return cmath.rect(math.exp(self.log_magnitude), self.phase)

    @property
    def magnitude(self) -> float:
        """|value| as a float: 0.0 for zeros, inf for poles, clipped exp else."""
        if self.order > 0:
            return 0.0
        if self.order < 0:
            return math.inf
        if self.log_magnitude > 709.0:
            return math.inf
        if self.log_magnitude < -745.0:
            return 0.0
        return math.exp(self.log_magnitude)

    @property
    def log10_magnitude(self) -> float:
        """log10 |value|; -inf for zeros, +inf for poles."""
        if self.order > 0:
            return -math.inf
        if self.order < 0:
            return math.inf
        return self.log_magnitude / math.log(10.0)

    def relative_difference(self, other: "SingularValue") -> float:
        """|self - other| / |other| through the log representation.

        Requires equal orders (else returns inf); the leading coefficients
        are compared, which is the meaningful relative error for zeros and
        poles as well as finite values.
        """
        if self.order != other.order:
            return math.inf
        r = math.exp(self.log_magnitude - other.log_magnitude)
        return abs(r * cmath.exp(1j * (self.phase - other.phase)) - 1.0)


def gamma_info(x: float, tau: float = TAU_INT) -> SingularValue:
    """Classify Gamma(x) on the real axis.

    Returns Pole(1) with the residue coefficient (-1)^k / k! when x is
    within ``tau`` of a non-positive integer -k, otherwise a Finite value
    carrying log Gamma(x).
    """
    if not math.isfinite(x):
        raise ValueError(f"non-finite argument {x!r}")
    k = _nearest_pole_index(complex(x), tau)
    if k is not None:
        info = GammaPoleInfo.at(k)
        return SingularValue.pole(
            1,
            math.log(abs(info.leading_coefficient)),
            0.0 if info.leading_coefficient.real > 0 else math.pi,
        )
    lg = log_gamma(x, tau)
    return SingularValue.finite(lg.real, lg.imag)


def hyp2f1(
    a: complex,
    b: complex,
    c: complex,
    z: complex,
    max_terms: int = 100_000,
    z_max: float = 0.95,
) -> complex:
    """Gauss hypergeometric 2F1 by direct series summation.

    Deliberately series-only and restricted to ``|z| < z_max``: this
    evaluator backs the wavefunction cross-checks and must stay independent
    of the Gamma-function connection identities, so no continuation
    formulas.  Neumaier-compensated summation keeps accuracy through the
    coefficient spikes that occur when c sits left of the origin.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if abs(z) >= z_max:
        raise ValueError(f"|z| = {abs(z):.4f} outside series domain (< {z_max})")
    if _nearest_pole_index(c, TAU_INT) is not None:
        raise PoleProximityError(f"c = {c} is a non-positive integer")
    if z == 0:
        return 1.0 + 0.0j

    total = 1.0 + 0.0j
    comp = 0.0 + 0.0j
    term = 1.0 + 0.0j
    quiet = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (1.0 + n)) * z
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        # term-ratio tail bound once the ratio has settled below 1
        if abs(term) <= 1e-17 * (abs(total) + abs(comp)):
            quiet += 1
            if quiet >= 3:
                return total + comp
        else:
            quiet = 0
    raise SeriesError(
        f"2F1({a}, {b}; {c}; {z}) did not converge within {max_terms} terms"
    )


def hyp2f1_deriv(a: complex, b: complex, c: complex, z: complex) -> complex:
    """d/dz of 2F1, via the contiguous relation F' = (ab/c) F(a+1,b+1;c+1;z)."""
    return a * b / c * hyp2f1(a + 1, b + 1, c + 1, z)
