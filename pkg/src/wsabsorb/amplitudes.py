"""Channel parameters, connection coefficients, and scattering amplitudes.

The four connection coefficients G1..G4 are Gamma-function ratios in the
channel parameters (a2, a3).  Reflection/transmission amplitudes are
ratios of those, so at critical energies where individual Gamma factors
hit poles the amplitudes are finite limits, exact zeros, or poles; all of
that is carried by the SingularValue algebra with coefficients normalized
to the energy offset from the critical point (pole-cancellation limits are
taken analytically via Gamma residues, never by nudging the energy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import TAU_INT, SingularValue, _nearest_pole_index, log_gamma
from .units import PotentialSpec, Variant, validate

__all__ = [
    "ChannelParams",
    "GFactors",
    "AmplitudeSet",
    "channel_params",
    "g_factors",
    "amplitudes",
    "det_s",
    "potential_profile",
    "hermitian_amplitudes",
]


@dataclass(frozen=True)
class ChannelParams:
    """Per-energy channel quantities.

    a2 and a3 carry the variant sign: the time-reversed potential has both
    negated, which is the whole content of the time-reversal map at the
    amplitude level.  k1 and k2 stay positive.
    """

    energy: float
    k1: float
    k2: float
    a2: complex
    a3: complex
    mass: float

    @property
    def da2_denergy(self) -> complex:
        return self.a2 * self.mass / (2.0 * self.k1 * self.k1)

    @property
    def da3_denergy(self) -> complex:
        return self.a3 * self.mass / (2.0 * self.k2 * self.k2)


@dataclass(frozen=True)
class GFactors:
    g1: SingularValue
    g2: SingularValue
    g3: SingularValue
    g4: SingularValue


@dataclass(frozen=True)
class AmplitudeSet:
    """All scattering amplitudes and coefficients at one energy."""

    energy: float
    rl: SingularValue
    rr: SingularValue
    tl: SingularValue
    tr: SingularValue
    Rl: SingularValue
    Rr: SingularValue
    T: SingularValue
    det_s: SingularValue


def channel_params(spec: PotentialSpec, energy: float) -> ChannelParams:
    """Wavenumbers and channel parameters at a positive energy."""
    validate(spec)
    if not (isinstance(energy, (int, float)) and math.isfinite(energy)):
        raise ValueError(f"energy must be finite, got {energy!r}")
    if energy <= 0:
        raise ValueError(f"energy must be positive, got {energy}")
    k1 = math.sqrt(spec.mass * energy)
    k2 = math.sqrt(spec.mass * (energy + spec.v0))
    sign = 1.0 if spec.variant is Variant.FORWARD else -1.0
    return ChannelParams(
        energy=float(energy),
        k1=k1,
        k2=k2,
        a2=sign * 2.0 * k1 / spec.rho,
        a3=sign * 2.0 * k2 / spec.rho,
        mass=spec.mass,
    )


def _gamma_factor(ch: ChannelParams, c2: int, c3: int, c0: int, tau: float) -> SingularValue:
    """SingularValue of Gamma(c2*a2 + c3*a3 + c0) in the energy-offset sense.

    Near a pole the residue is rescaled by the energy derivative of the
    argument, so that coefficients of different Gamma factors combine in a
    common limit variable (the offset from the critical energy).
    """
    arg = c2 * ch.a2 + c3 * ch.a3 + c0
    k = _nearest_pole_index(complex(arg), tau)
    if k is not None:
        deriv = complex(c2 * ch.da2_denergy + c3 * ch.da3_denergy)
        if deriv == 0:
            deriv = 1.0 + 0.0j  # stationary argument; leave the residue unscaled
        # residue (-1)^k / k!, divided by d(arg)/dE
        log_res = -log_gamma(float(k + 1)).real
        res_phase = math.pi if k % 2 else 0.0
        return SingularValue.pole(
            1,
            log_res - math.log(abs(deriv)),
            res_phase - math.atan2(deriv.imag, deriv.real),
        )
    lg = log_gamma(arg, tau)
    return SingularValue.finite(lg.real, lg.imag)


# numerator/denominator Gamma arguments of G1..G4 as (c2, c3, c0) triples
_G_TABLE = (
    (((2, 0, 1), (0, -2, 0)), ((1, -1, 0), (1, -1, 1))),
    (((2, 0, 1), (0, 2, 0)), ((1, 1, 0), (1, 1, 1))),
    (((-2, 0, 1), (0, -2, 0)), ((-1, -1, 0), (-1, -1, 1))),
    (((-2, 0, 1), (0, 2, 0)), ((-1, 1, 0), (-1, 1, 1))),
)


def g_factors(ch: ChannelParams, tau: float = TAU_INT) -> GFactors:
    """The four connection coefficients, assembled in log space."""
    out = []
    for numer, denom in _G_TABLE:
        value = SingularValue.finite(0.0, 0.0)
        for c2, c3, c0 in numer:
            value = value * _gamma_factor(ch, c2, c3, c0, tau)
        for c2, c3, c0 in denom:
            value = value / _gamma_factor(ch, c2, c3, c0, tau)
        out.append(value)
    return GFactors(*out)


def _det_cross_check(
    t2: SingularValue, rlrr: SingularValue, det_closed: SingularValue, energy: float
) -> None:
    """Verify tl*tr - rl*rr against the closed-form det S.

    The difference can cancel arbitrarily many digits (the Gamma identity
    makes the two products nearly equal wherever |det S| is small), so the
    tolerance scales with the observed cancellation; where the closed form
    is an exact zero of higher order than the float difference can
    resolve, only the cancellation depth is asserted.
    """
    try:
        det_sum = t2 - rlrr
    except ArithmeticError:
        return  # coefficients cancelled exactly; no digits left to compare
    cancel = 0.0
    if t2.order == rlrr.order:
        cancel = max(t2.log_magnitude, rlrr.log_magnitude) - det_sum.log_magnitude
    if det_sum.order == det_closed.order:
        tol = 1e-8 * max(1.0, math.exp(min(200.0, cancel)))
        if det_closed.order != 0:
            # a snapped critical point: the finite cofactors sit up to the
            # snap tolerance away from the exact pole, so the two leading
            # coefficients differ by the subleading Laurent term, bounded
            # by tau times the digamma scale of the dozen Gamma factors
            tol += 300.0 * TAU_INT
        rel = det_sum.relative_difference(det_closed)
        if rel > tol:
            raise ArithmeticError(
                f"det S cross-check failed at E={energy}: rel diff {rel:.3e}"
            )
    elif det_closed.order > det_sum.order:
        # an exact higher-order zero; the sum is cancellation residue
        if cancel < 9.0 * math.log(10.0):
            raise ArithmeticError(
                f"det S zero not reproduced at E={energy}: "
                f"only {cancel / math.log(10.0):.1f} digits cancelled"
            )
    else:
        raise ArithmeticError(
            f"det S more singular via the sum route at E={energy}: "
            f"orders {det_sum.order} vs {det_closed.order}"
        )


def _assemble(ch: ChannelParams, gf: GFactors) -> AmplitudeSet:
    sqrt_k_ratio = SingularValue.finite(0.5 * math.log(ch.k1 / ch.k2), 0.0)
    rl = gf.g4 / gf.g3
    tl = sqrt_k_ratio / gf.g3
    rr = -(gf.g1 / gf.g3)
    det_closed = gf.g2 / gf.g3
    _det_cross_check(tl * tl, rl * rr, det_closed, ch.energy)

    return AmplitudeSet(
        energy=ch.energy,
        rl=rl,
        rr=rr,
        tl=tl,
        tr=tl,
        Rl=rl.abs_squared(),
        Rr=rr.abs_squared(),
        T=tl.abs_squared(),
        det_s=det_closed,
    )


def amplitudes(spec: PotentialSpec, energy: float, tau: float = TAU_INT) -> AmplitudeSet:
    """Reflection/transmission amplitudes and coefficients at one energy.

    The left/right transmission amplitudes are one and the same
    expression; det S comes out as the closed-form G-ratio and is verified
    against tl*tr - rl*rr on every call.
    """
    ch = channel_params(spec, energy)
    return _assemble(ch, g_factors(ch, tau))


def det_s(spec: PotentialSpec, energy: float, tau: float = TAU_INT) -> SingularValue:
    """det S as the closed-form Gamma ratio (G2/G3, or its inverse when
    the stored channel parameters are the time-reversed ones)."""
    ch = channel_params(spec, energy)
    gf = g_factors(ch, tau)
    return gf.g2 / gf.g3


def potential_profile(spec: PotentialSpec, x: float, zeta_grid) -> np.ndarray:
    """Complex potential sampled along the imaginary-shift direction.

    Returns -v0 / (1 + e^{rho*zeta} e^{i rho x}) per grid point; the
    time-reversed variant is its complex conjugate.
    """
    validate(spec)
    zeta = np.asarray(zeta_grid, dtype=float)
    phase = np.exp(1j * spec.rho * x)
    with np.errstate(over="ignore", invalid="ignore"):
        grow = np.exp(spec.rho * zeta)
        far = np.isinf(grow)
        denom = np.where(far, 1.0, 1.0 + grow * phase)
        values = np.where(far, 0.0 + 0.0j, -spec.v0 / denom)
    if spec.variant is Variant.TIME_REVERSED:
        values = np.conj(values)
    return values


def hermitian_amplitudes(
    v0: float, delta: float, m: float, energy: float, tau: float = TAU_INT
) -> AmplitudeSet:
    """Amplitudes of the uncomplexified (Hermitian) potential.

    Same G expressions evaluated at purely imaginary channel parameters;
    reciprocity and unitarity hold here, which the tests use as a limit
    check on the whole assembly.
    """
    if v0 <= 0 or delta <= 0 or m <= 0:
        raise ValueError("v0, delta and m must be positive")
    if energy <= 0:
        raise ValueError(f"energy must be positive, got {energy}")
    k1 = math.sqrt(m * energy)
    k2 = math.sqrt(m * (energy + v0))
    ch = ChannelParams(
        energy=float(energy),
        k1=k1,
        k2=k2,
        a2=2j * k1 / delta,
        a3=2j * k2 / delta,
        mass=m,
    )
    return _assemble(ch, g_factors(ch, tau))
